use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Student-t CDF through the regularized incomplete beta function.
pub fn t_cdf(t: f64, df: f64) -> Result<f64> {
    if !(df > 0.0) {
        return Err(Error::invalid(format!("degrees of freedom must be positive, got {df}")));
    }
    if t == 0.0 {
        return Ok(0.5);
    }
    if t.is_nan() {
        return Ok(f64::NAN);
    }
    let tail = 0.5 * beta_reg(df / 2.0, 0.5, df / (df + t * t));
    Ok(if t > 0.0 { 1.0 - tail } else { tail })
}

/// `2 * (1 - CDF(|t|))`, evaluated without the cancellation.
pub fn two_sided_p(t: f64, df: f64) -> Result<f64> {
    if !(df > 0.0) {
        return Err(Error::invalid(format!("degrees of freedom must be positive, got {df}")));
    }
    if t.is_nan() {
        return Ok(f64::NAN);
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    Ok(beta_reg(df / 2.0, 0.5, df / (df + t * t)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OlsFit {
    pub coefficients: DVector<f64>,
    pub std_errors: DVector<f64>,
    pub fitted: DVector<f64>,
    pub residuals: DVector<f64>,
    pub rss: f64,
    pub df: usize,
}

/// Least squares through Householder QR. Errors when X is rank deficient.
pub fn ols(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<OlsFit> {
    let (n, k) = x.shape();
    if n < k {
        return Err(Error::RankDeficient(format!("{n} observations for {k} columns")));
    }
    let qr = x.clone().qr();
    let r = qr.r();
    let scale = r.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(j) = (0..k).find(|&j| r[(j, j)].abs() <= 1e-10 * scale.max(1.0)) {
        return Err(Error::RankDeficient(format!("column {j} is a linear combination of earlier columns")));
    }
    let qty = qr.q().transpose() * y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::RankDeficient("singular R factor".into()))?;
    let fitted = x * &beta;
    let residuals = y - &fitted;
    let rss = residuals.norm_squared();
    let df = n - k;
    let sigma2 = if df > 0 { rss / df as f64 } else { f64::NAN };
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| Error::RankDeficient("singular R factor".into()))?;
    // (X'X)^-1 = R^-1 R^-T
    let std_errors = DVector::from_iterator(k, (0..k).map(|i| (sigma2 * r_inv.row(i).norm_squared()).sqrt()));
    Ok(OlsFit {
        coefficients: beta,
        std_errors,
        fitted,
        residuals,
        rss,
        df,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub accuracy: f64,
    pub dataset: String,
    pub condition: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OlsOptions {
    /// Falls back to `cdl` when present, else the alphabetically first dataset.
    pub reference_dataset: Option<String>,
    /// Falls back to the alphabetically first condition when absent from the data.
    pub reference_condition: String,
}

impl Default for OlsOptions {
    fn default() -> Self {
        OlsOptions {
            reference_dataset: None,
            reference_condition: "ORIGINAL".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionResult {
    pub terms: Vec<String>,
    pub estimates: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub r_squared: f64,
    pub n: usize,
    pub df_residual: usize,
    pub reference_dataset: String,
    pub reference_condition: String,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
}

fn levels<'a>(it: impl Iterator<Item = &'a str>, preferred: Option<&str>) -> Vec<String> {
    let set: BTreeSet<&str> = it.collect();
    let mut v: Vec<String> = set.iter().map(|s| s.to_string()).collect();
    if let Some(p) = preferred.and_then(|p| v.iter().position(|l| l == p)) {
        let r = v.remove(p);
        v.insert(0, r);
    }
    v
}

/// accuracy ~ dataset * condition with treatment coding. Column order:
/// intercept, dataset dummies, condition dummies, then interactions
/// (dataset-major).
pub fn ols_interaction(obs: &[Observation], opts: &OlsOptions) -> Result<RegressionResult> {
    let ref_ds = opts
        .reference_dataset
        .clone()
        .or_else(|| obs.iter().any(|o| o.dataset == "cdl").then(|| "cdl".to_string()));
    let datasets = levels(obs.iter().map(|o| o.dataset.as_str()), ref_ds.as_deref());
    let conditions = levels(obs.iter().map(|o| o.condition.as_str()), Some(&opts.reference_condition));
    if datasets.len() < 2 || conditions.len() < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 datasets and 2 conditions, got {} and {}",
            datasets.len(),
            conditions.len()
        )));
    }
    if let Some(r) = &opts.reference_dataset {
        if &datasets[0] != r {
            return Err(Error::invalid(format!("reference dataset {r:?} has no observations")));
        }
    }
    let mut cells: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for o in obs {
        *cells.entry((&o.dataset, &o.condition)).or_default() += 1;
    }
    for d in &datasets {
        for c in &conditions {
            if !cells.contains_key(&(d.as_str(), c.as_str())) {
                return Err(Error::RankDeficient(format!("empty cell dataset={d} condition={c}")));
            }
        }
    }

    let mut terms = vec!["(Intercept)".to_string()];
    terms.extend(datasets[1..].iter().map(|d| format!("dataset[T.{d}]")));
    terms.extend(conditions[1..].iter().map(|c| format!("condition[T.{c}]")));
    for d in &datasets[1..] {
        for c in &conditions[1..] {
            terms.push(format!("dataset[T.{d}]:condition[T.{c}]"));
        }
    }
    let (nd, nc) = (datasets.len() - 1, conditions.len() - 1);
    let k = terms.len();
    let n = obs.len();
    let mut x = DMatrix::zeros(n, k);
    for (i, o) in obs.iter().enumerate() {
        x[(i, 0)] = 1.0;
        let di = datasets.iter().position(|d| d == &o.dataset).unwrap();
        let ci = conditions.iter().position(|c| c == &o.condition).unwrap();
        if di > 0 {
            x[(i, di)] = 1.0;
        }
        if ci > 0 {
            x[(i, nd + ci)] = 1.0;
        }
        if di > 0 && ci > 0 {
            x[(i, 1 + nd + nc + (di - 1) * nc + (ci - 1))] = 1.0;
        }
    }
    let y = DVector::from_iterator(n, obs.iter().map(|o| o.accuracy));
    let fit = ols(&x, &y)?;

    // Every dataset x condition cell has its own parameter, so the fitted
    // value of an observation is its cell mean. Taking it directly avoids
    // the rounding of the QR back-substitution.
    let mut sums: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    for o in obs {
        *sums.entry((&o.dataset, &o.condition)).or_default() += o.accuracy;
    }
    let fitted: Vec<f64> = obs
        .iter()
        .map(|o| {
            let key = (o.dataset.as_str(), o.condition.as_str());
            sums[&key] / cells[&key] as f64
        })
        .collect();
    let residuals: Vec<f64> = obs.iter().zip(&fitted).map(|(o, f)| o.accuracy - f).collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();

    let mean = y.mean();
    let tss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r_squared = if tss > 0.0 { (1.0 - rss / tss).clamp(0.0, 1.0) } else { 1.0 };
    let t_values: Vec<f64> = fit
        .coefficients
        .iter()
        .zip(fit.std_errors.iter())
        .map(|(b, se)| b / se)
        .collect();
    let p_values = t_values
        .iter()
        .map(|&t| if fit.df > 0 { two_sided_p(t, fit.df as f64) } else { Ok(f64::NAN) })
        .collect::<Result<_>>()?;
    Ok(RegressionResult {
        terms,
        estimates: fit.coefficients.iter().copied().collect(),
        std_errors: fit.std_errors.iter().copied().collect(),
        t_values,
        p_values,
        r_squared,
        n,
        df_residual: fit.df,
        reference_dataset: datasets[0].clone(),
        reference_condition: conditions[0].clone(),
        fitted,
        residuals,
    })
}

impl RegressionResult {
    pub fn estimate(&self, term: &str) -> Option<f64> {
        self.terms.iter().position(|t| t == term).map(|i| self.estimates[i])
    }

    /// `term,estimate,std_error,t,p`
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["term", "estimate", "std_error", "t", "p"])?;
        for i in 0..self.terms.len() {
            w.write_record([
                self.terms[i].clone(),
                self.estimates[i].to_string(),
                self.std_errors[i].to_string(),
                self.t_values[i].to_string(),
                self.p_values[i].to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_table(&self) -> String {
        let width = self.terms.iter().map(|t| t.len()).max().unwrap_or(4).max(4);
        let mut s = format!(
            "OLS accuracy ~ dataset * condition (reference: {} / {})\n",
            self.reference_dataset, self.reference_condition
        );
        let _ = writeln!(s, "{:<width$}  {:>10}  {:>10}  {:>8}  {:>8}", "term", "estimate", "std.err", "t", "p");
        for i in 0..self.terms.len() {
            let _ = writeln!(
                s,
                "{:<width$}  {:>10.4}  {:>10.4}  {:>8.3}  {:>8.4}",
                self.terms[i], self.estimates[i], self.std_errors[i], self.t_values[i], self.p_values[i]
            );
        }
        let _ = writeln!(s, "n = {}, residual df = {}, R^2 = {:.4}", self.n, self.df_residual, self.r_squared);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_cdf_basics() {
        assert_eq!(t_cdf(0.0, 3.0).unwrap(), 0.5);
        assert!(t_cdf(1.0, 0.0).is_err());
        assert!(t_cdf(1.0, -2.0).is_err());
        assert!((t_cdf(1e6, 5.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(t_cdf(f64::INFINITY, 5.0).unwrap(), 1.0);
        // df = 1 is Cauchy: CDF(1) = 3/4
        assert!((t_cdf(1.0, 1.0).unwrap() - 0.75).abs() < 1e-12);
        // df = 2 closed form: 1/2 + t / (2 sqrt(2 + t^2))
        let t: f64 = 1.3;
        assert!((t_cdf(t, 2.0).unwrap() - (0.5 + t / (2.0 * (2.0 + t * t).sqrt()))).abs() < 1e-12);
    }

    #[test]
    fn t_cdf_symmetry() {
        for df in [1.0, 2.5, 10.0, 300.0] {
            for t in [0.1, 0.7, 1.96, 4.0] {
                let s = t_cdf(-t, df).unwrap() + t_cdf(t, df).unwrap();
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn simple_regression_matches_closed_form() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ys = [2.1, 3.9, 6.2, 7.8, 10.1];
        let x = DMatrix::from_fn(5, 2, |i, j| if j == 0 { 1.0 } else { xs[i] });
        let fit = ols(&x, &DVector::from_row_slice(&ys)).unwrap();
        let mx = xs.iter().sum::<f64>() / 5.0;
        let my = ys.iter().sum::<f64>() / 5.0;
        let sxy: f64 = xs.iter().zip(&ys).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = xs.iter().map(|a| (a - mx).powi(2)).sum();
        let slope = sxy / sxx;
        assert!((fit.coefficients[1] - slope).abs() < 1e-12);
        assert!((fit.coefficients[0] - (my - slope * mx)).abs() < 1e-12);
        let se = (fit.rss / 3.0 / sxx).sqrt();
        assert!((fit.std_errors[1] - se).abs() < 1e-12);
    }

    #[test]
    fn collinear_design_is_rejected() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
        assert!(matches!(ols(&x, &DVector::from_row_slice(&[1.0, 2.0, 3.0])), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn missing_cell_is_named() {
        let obs = vec![
            Observation { accuracy: 0.9, dataset: "cdl".into(), condition: "ORIGINAL".into() },
            Observation { accuracy: 0.8, dataset: "cdl".into(), condition: "SHUFFLE.ORDER".into() },
            Observation { accuracy: 0.7, dataset: "bnc".into(), condition: "ORIGINAL".into() },
        ];
        let e = ols_interaction(&obs, &OlsOptions::default()).unwrap_err();
        assert!(e.to_string().contains("dataset=bnc condition=SHUFFLE.ORDER"), "{e}");
    }

    #[test]
    fn reference_levels_come_first() {
        let mut obs = Vec::new();
        for d in ["wikipedia", "bnc", "cdl", "candor"] {
            for c in ["SHUFFLE.ORDER", "ORIGINAL"] {
                for r in 0..2 {
                    obs.push(Observation { accuracy: 0.5 + 0.01 * r as f64, dataset: d.into(), condition: c.into() });
                }
            }
        }
        let r = ols_interaction(&obs, &OlsOptions::default()).unwrap();
        assert_eq!(r.reference_dataset, "cdl");
        assert_eq!(r.reference_condition, "ORIGINAL");
        assert_eq!(r.terms[1], "dataset[T.bnc]");
        assert_eq!(r.terms.len(), 8);
        assert_eq!(r.terms[7], "dataset[T.wikipedia]:condition[T.SHUFFLE.ORDER]");
    }
}
