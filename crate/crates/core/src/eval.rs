//! Accuracy over scored minimal pairs and the train × eval domain matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pairgen::{MinimalPair, Paradigm};
use crate::scorer::PairScore;

/// Paradigm name used for the all-pairs row in result files.
pub const ALL_PARADIGMS: &str = "all";

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EvalLabels {
    pub train_domain: String,
    pub eval_domain: String,
    pub condition: String,
    pub checkpoint: String,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParadigmResult {
    pub accuracy: f64,
    pub n: usize,
    pub ties: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub accuracy: f64,
    pub n_pairs: usize,
    pub n_wins: usize,
    pub n_ties: usize,
    pub per_paradigm: BTreeMap<String, ParadigmResult>,
    pub labels: EvalLabels,
}

fn credit(wins: usize, ties: usize, n: usize) -> f64 {
    (wins as f64 + 0.5 * ties as f64) / n as f64
}

/// A pair is won when the good member scores strictly higher; exact ties
/// earn half credit.
pub fn evaluate(scored: &[PairScore], pairs: &[MinimalPair], labels: EvalLabels) -> Result<EvalResult> {
    if scored.is_empty() {
        return Err(Error::NoPairs);
    }
    let paradigm_of: HashMap<&str, Paradigm> = pairs.iter().map(|p| (p.pair_id.as_str(), p.paradigm)).collect();
    let mut seen = HashSet::with_capacity(scored.len());
    // paradigm -> (wins, ties, n)
    let mut tally: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
    for s in scored {
        if !seen.insert(s.pair_id.as_str()) {
            return Err(Error::DuplicatePairId(s.pair_id.clone()));
        }
        let paradigm = paradigm_of
            .get(s.pair_id.as_str())
            .ok_or_else(|| Error::invalid(format!("no pair metadata for {:?}", s.pair_id)))?;
        let t = tally.entry(paradigm.name().to_string()).or_default();
        if s.logprob_good > s.logprob_bad {
            t.0 += 1;
        } else if s.logprob_good == s.logprob_bad {
            t.1 += 1;
        }
        t.2 += 1;
    }
    let (wins, ties) = tally.values().fold((0, 0), |(w, t), v| (w + v.0, t + v.1));
    let n = scored.len();
    Ok(EvalResult {
        accuracy: credit(wins, ties, n),
        n_pairs: n,
        n_wins: wins,
        n_ties: ties,
        per_paradigm: tally
            .into_iter()
            .map(|(k, (w, t, n))| {
                (
                    k,
                    ParadigmResult {
                        accuracy: credit(w, t, n),
                        n,
                        ties: t,
                    },
                )
            })
            .collect(),
        labels,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossDomainMatrix {
    /// Row and column labels; rows are training domains, columns evaluation domains.
    pub domains: Vec<String>,
    pub cells: Vec<Vec<Option<f64>>>,
    pub diagonal_mean: Option<f64>,
    pub off_diagonal_mean: Option<f64>,
    pub missing: Vec<(String, String)>,
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

impl CrossDomainMatrix {
    pub fn cell(&self, train: &str, eval: &str) -> Option<f64> {
        let i = self.domains.iter().position(|d| d == train)?;
        let j = self.domains.iter().position(|d| d == eval)?;
        self.cells[i][j]
    }

    /// Rows `train_domain,<eval domains...>`; gaps are written as `NA`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("train_domain");
        for d in &self.domains {
            out.push(',');
            out.push_str(d);
        }
        out.push('\n');
        for (d, row) in self.domains.iter().zip(&self.cells) {
            out.push_str(d);
            for c in row {
                out.push(',');
                match c {
                    Some(a) => out.push_str(&a.to_string()),
                    None => out.push_str("NA"),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Averages accuracy per (train, eval) cell over every result given (seeds,
/// conditions) and lays the cells out on the union of domains seen.
pub fn cross_domain_matrix(results: &[EvalResult]) -> CrossDomainMatrix {
    let mut acc: BTreeMap<(&str, &str), Vec<f64>> = BTreeMap::new();
    let mut domains = BTreeSet::new();
    for r in results {
        let l = &r.labels;
        domains.insert(l.train_domain.clone());
        domains.insert(l.eval_domain.clone());
        acc.entry((&l.train_domain, &l.eval_domain)).or_default().push(r.accuracy);
    }
    let domains: Vec<String> = domains.into_iter().collect();
    let mut cells = vec![vec![None; domains.len()]; domains.len()];
    let (mut diag, mut off, mut missing) = (Vec::new(), Vec::new(), Vec::new());
    for (i, t) in domains.iter().enumerate() {
        for (j, e) in domains.iter().enumerate() {
            match acc.get(&(t.as_str(), e.as_str())).and_then(|v| mean(v)) {
                Some(a) => {
                    cells[i][j] = Some(a);
                    if i == j { diag.push(a) } else { off.push(a) }
                }
                None => {
                    warn!("cross-domain matrix has no result for train={t} eval={e}");
                    missing.push((t.clone(), e.clone()));
                }
            }
        }
    }
    CrossDomainMatrix {
        domains,
        cells,
        diagonal_mean: mean(&diag),
        off_diagonal_mean: mean(&off),
        missing,
    }
}

/// One line of a results file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub train_domain: String,
    pub eval_domain: String,
    pub condition: String,
    pub checkpoint: String,
    pub seed: Option<u64>,
    pub paradigm: String,
    pub accuracy: f64,
    pub n: usize,
    pub ties: usize,
}

impl EvalResult {
    /// The overall row followed by one row per paradigm.
    pub fn rows(&self) -> Vec<ResultRow> {
        let l = &self.labels;
        let row = |paradigm: &str, r: ParadigmResult| ResultRow {
            train_domain: l.train_domain.clone(),
            eval_domain: l.eval_domain.clone(),
            condition: l.condition.clone(),
            checkpoint: l.checkpoint.clone(),
            seed: l.seed,
            paradigm: paradigm.to_string(),
            accuracy: r.accuracy,
            n: r.n,
            ties: r.ties,
        };
        let mut rows = vec![row(
            ALL_PARADIGMS,
            ParadigmResult {
                accuracy: self.accuracy,
                n: self.n_pairs,
                ties: self.n_ties,
            },
        )];
        rows.extend(self.per_paradigm.iter().map(|(k, v)| row(k, *v)));
        rows
    }
}

pub fn rows_to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["train_domain", "eval_domain", "condition", "checkpoint", "seed", "paradigm", "accuracy", "n", "ties"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|x| x.map_err(Error::from)).collect()
}

pub fn write_results(results: &[EvalResult], path: &Path) -> Result<()> {
    let rows: Vec<ResultRow> = results.iter().flat_map(EvalResult::rows).collect();
    fs::write(path, rows_to_csv(&rows)?).map_err(|e| Error::io(path, e))
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    rows_from_csv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(id: &str, paradigm: Paradigm) -> MinimalPair {
        MinimalPair {
            pair_id: id.into(),
            paradigm,
            good: vec!["a".into(), "b".into()],
            bad: vec!["a".into(), "c".into()],
            diff_index: 1,
            source_sentence_id: None,
            meta: BTreeMap::new(),
        }
    }

    fn score(id: &str, g: f64, b: f64) -> PairScore {
        PairScore {
            pair_id: id.into(),
            logprob_good: g,
            logprob_bad: b,
        }
    }

    fn result(train: &str, eval: &str, acc: f64) -> EvalResult {
        EvalResult {
            accuracy: acc,
            n_pairs: 1,
            n_wins: 0,
            n_ties: 0,
            per_paradigm: BTreeMap::new(),
            labels: EvalLabels {
                train_domain: train.into(),
                eval_domain: eval.into(),
                ..Default::default()
            },
        }
    }

    #[test]
    fn win_win_loss_tie() {
        let pairs: Vec<_> = ["p1", "p2", "p3", "p4"].iter().map(|i| pair(i, Paradigm::SemanticVerb)).collect();
        let s = vec![score("p1", -1.0, -2.0), score("p2", -3.0, -4.0), score("p3", -5.0, -1.0), score("p4", -2.0, -2.0)];
        let r = evaluate(&s, &pairs, EvalLabels::default()).unwrap();
        assert_eq!(r.accuracy, 0.625);
        assert_eq!((r.n_pairs, r.n_wins, r.n_ties), (4, 2, 1));
    }

    #[test]
    fn all_ties_is_chance() {
        let pairs: Vec<_> = (0..7).map(|i| pair(&format!("p{i}"), Paradigm::AgrPp)).collect();
        let s: Vec<_> = (0..7).map(|i| score(&format!("p{i}"), -3.0, -3.0)).collect();
        assert_eq!(evaluate(&s, &pairs, EvalLabels::default()).unwrap().accuracy, 0.5);
    }

    #[test]
    fn empty_duplicate_and_unknown_are_errors() {
        let pairs = vec![pair("p1", Paradigm::AgrSimple)];
        assert!(matches!(evaluate(&[], &pairs, EvalLabels::default()), Err(Error::NoPairs)));
        let dup = vec![score("p1", -1.0, -2.0), score("p1", -1.0, -2.0)];
        assert!(matches!(evaluate(&dup, &pairs, EvalLabels::default()), Err(Error::DuplicatePairId(_))));
        assert!(evaluate(&[score("zz", -1.0, -2.0)], &pairs, EvalLabels::default()).is_err());
    }

    #[test]
    fn per_paradigm_counts_sum() {
        let pairs = vec![pair("a", Paradigm::AgrSimple), pair("b", Paradigm::AgrPp), pair("c", Paradigm::AgrPp)];
        let s = vec![score("a", -1.0, -2.0), score("b", -2.0, -1.0), score("c", -1.0, -1.0)];
        let r = evaluate(&s, &pairs, EvalLabels::default()).unwrap();
        assert_eq!(r.per_paradigm.values().map(|p| p.n).sum::<usize>(), r.n_pairs);
        assert_eq!(r.per_paradigm["agr-pp"].accuracy, 0.25);
        assert_eq!(r.per_paradigm["agr-simple"].accuracy, 1.0);
    }

    #[test]
    fn two_by_two_matrix_means() {
        let m = cross_domain_matrix(&[
            result("a", "a", 0.9),
            result("a", "b", 0.6),
            result("b", "a", 0.6),
            result("b", "b", 0.9),
        ]);
        assert!((m.diagonal_mean.unwrap() - 0.9).abs() < 1e-12);
        assert!((m.off_diagonal_mean.unwrap() - 0.6).abs() < 1e-12);
        assert!(m.missing.is_empty());
    }

    #[test]
    fn single_domain_and_gap() {
        let m = cross_domain_matrix(&[result("a", "a", 0.8)]);
        assert_eq!(m.cells, vec![vec![Some(0.8)]]);
        let m = cross_domain_matrix(&[result("a", "a", 0.9), result("a", "b", 0.6), result("b", "b", 0.9)]);
        assert_eq!(m.missing, vec![("b".to_string(), "a".to_string())]);
        assert_eq!(m.cell("b", "a"), None);
        assert!(m.to_csv().contains("b,NA,0.9"));
    }

    #[test]
    fn csv_round_trip() {
        let pairs = vec![pair("a", Paradigm::AgrSimple), pair("b", Paradigm::SemanticVerb)];
        let s = vec![score("a", -1.0, -2.0), score("b", -2.0, -1.0)];
        let r = evaluate(&s, &pairs, EvalLabels::default()).unwrap();
        let rows = r.rows();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows_from_csv(&rows_to_csv(&rows).unwrap()).unwrap(), rows);
    }

    fn arb_scores() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-100.0f64..0.0, -100.0f64..0.0), 1..60)
    }

    proptest! {
        #[test]
        fn reversal_complements_accuracy(v in arb_scores()) {
            prop_assume!(v.iter().all(|(g, b)| g != b));
            let pairs: Vec<_> = (0..v.len()).map(|i| pair(&i.to_string(), Paradigm::SemanticVerb)).collect();
            let fwd: Vec<_> = v.iter().enumerate().map(|(i, (g, b))| score(&i.to_string(), *g, *b)).collect();
            let rev: Vec<_> = v.iter().enumerate().map(|(i, (g, b))| score(&i.to_string(), *b, *g)).collect();
            let a = evaluate(&fwd, &pairs, EvalLabels::default()).unwrap().accuracy;
            let b = evaluate(&rev, &pairs, EvalLabels::default()).unwrap().accuracy;
            prop_assert!((a + b - 1.0).abs() < 1e-12);
        }

        #[test]
        fn invariant_under_positive_affine_maps(v in arb_scores(), scale in 0.01f64..10.0, shift in -50.0f64..50.0) {
            let pairs: Vec<_> = (0..v.len()).map(|i| pair(&i.to_string(), Paradigm::SemanticVerb)).collect();
            let s: Vec<_> = v.iter().enumerate().map(|(i, (g, b))| score(&i.to_string(), *g, *b)).collect();
            let t: Vec<_> = v.iter().enumerate()
                .map(|(i, (g, b))| score(&i.to_string(), scale * g + shift, scale * b + shift))
                .collect();
            // Rounding in the map can merge or split near-ties; only compare clear decisions.
            prop_assume!(v.iter().all(|(g, b)| (g - b).abs() > 1e-9));
            let a = evaluate(&s, &pairs, EvalLabels::default()).unwrap().accuracy;
            let b = evaluate(&t, &pairs, EvalLabels::default()).unwrap().accuracy;
            prop_assert_eq!(a, b);
        }
    }
}
