use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Accuracy a series must reach to count as "acquired" at a checkpoint.
pub const SEMANTIC_FIRST_THRESHOLD: f64 = 0.75;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub checkpoint: String,
    pub semantic_acc: f64,
    pub syntactic_acc: f64,
    /// semantic / syntactic; undefined when syntactic accuracy is zero.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryTable {
    pub rows: Vec<TrajectoryRow>,
    pub threshold: f64,
    /// Earliest checkpoint with semantic accuracy at or above the threshold.
    pub semantic_first_checkpoint: Option<String>,
    /// Earliest checkpoint with syntactic accuracy at or above the threshold.
    pub syntactic_first_checkpoint: Option<String>,
}

fn parse_checkpoint(label: &str) -> Result<f64> {
    label
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::invalid(format!("checkpoint label {label:?} is not a number")))
}

fn index(series: &[(String, f64)], name: &str) -> Result<BTreeMap<String, f64>> {
    let mut m = BTreeMap::new();
    for (c, a) in series {
        if !(0.0..=1.0).contains(a) {
            return Err(Error::invalid(format!("{name} accuracy {a} at checkpoint {c} is outside [0, 1]")));
        }
        if m.insert(c.clone(), *a).is_some() {
            return Err(Error::invalid(format!("checkpoint {c} appears twice in the {name} series")));
        }
    }
    Ok(m)
}

/// Joins the two series on checkpoint label and sorts numerically.
pub fn trajectory(semantic: &[(String, f64)], syntactic: &[(String, f64)], threshold: f64) -> Result<TrajectoryTable> {
    let sem = index(semantic, "semantic")?;
    let syn = index(syntactic, "syntactic")?;
    let asym: Vec<&str> = sem
        .keys()
        .filter(|k| !syn.contains_key(*k))
        .chain(syn.keys().filter(|k| !sem.contains_key(*k)))
        .map(String::as_str)
        .collect();
    if !asym.is_empty() {
        return Err(Error::invalid(format!(
            "checkpoint sets differ; present in only one series: {}",
            asym.join(", ")
        )));
    }
    let mut keyed = Vec::with_capacity(sem.len());
    for (c, &s) in &sem {
        keyed.push((parse_checkpoint(c)?, c.clone(), s, syn[c]));
    }
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let rows: Vec<TrajectoryRow> = keyed
        .into_iter()
        .map(|(_, c, s, y)| TrajectoryRow {
            checkpoint: c,
            semantic_acc: s,
            syntactic_acc: y,
            ratio: (y > 0.0).then(|| s / y),
        })
        .collect();
    let first = |f: fn(&TrajectoryRow) -> f64| rows.iter().find(|r| f(r) >= threshold).map(|r| r.checkpoint.clone());
    Ok(TrajectoryTable {
        semantic_first_checkpoint: first(|r| r.semantic_acc),
        syntactic_first_checkpoint: first(|r| r.syntactic_acc),
        threshold,
        rows,
    })
}

impl TrajectoryTable {
    /// True when semantic accuracy crosses the threshold at a strictly earlier
    /// checkpoint than syntactic accuracy. A series that never crosses counts
    /// as later than any that does; `None` when neither crosses.
    pub fn semantic_first(&self) -> Option<bool> {
        let pos = |c: &Option<String>| c.as_ref().and_then(|c| self.rows.iter().position(|r| &r.checkpoint == c));
        match (pos(&self.semantic_first_checkpoint), pos(&self.syntactic_first_checkpoint)) {
            (None, None) => None,
            (Some(_), None) => Some(true),
            (None, Some(_)) => Some(false),
            (Some(a), Some(b)) => Some(a < b),
        }
    }

    /// `checkpoint,semantic_acc,syntactic_acc,ratio` with `NA` for an undefined ratio.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("checkpoint,semantic_acc,syntactic_acc,ratio\n");
        for r in &self.rows {
            let ratio = r.ratio.map_or_else(|| "NA".to_string(), |v| v.to_string());
            out.push_str(&format!("{},{},{},{}\n", r.checkpoint, r.semantic_acc, r.syntactic_acc, ratio));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[(&str, f64)]) -> Vec<(String, f64)> {
        v.iter().map(|(c, a)| (c.to_string(), *a)).collect()
    }

    #[test]
    fn ratio_and_undefined_ratio() {
        let t = trajectory(&s(&[("1", 0.8), ("0.5", 0.6)]), &s(&[("0.5", 0.0), ("1", 0.5)]), 0.75).unwrap();
        assert_eq!(t.rows[0].checkpoint, "0.5");
        assert_eq!(t.rows[0].ratio, None);
        assert!((t.rows[1].ratio.unwrap() - 1.6).abs() < 1e-12);
    }

    #[test]
    fn numeric_not_lexical_order() {
        let c = [("20", 0.9), ("0.04", 0.5), ("1", 0.7), ("3", 0.8)];
        let t = trajectory(&s(&c), &s(&c), 0.75).unwrap();
        let order: Vec<&str> = t.rows.iter().map(|r| r.checkpoint.as_str()).collect();
        assert_eq!(order, vec!["0.04", "1", "3", "20"]);
    }

    #[test]
    fn mismatched_sets_list_both_sides() {
        let e = trajectory(&s(&[("1", 0.5), ("2", 0.6)]), &s(&[("2", 0.5), ("3", 0.6)]), 0.75).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains('1') && msg.contains('3'), "{msg}");
    }

    #[test]
    fn non_numeric_label_is_rejected() {
        assert!(trajectory(&s(&[("final", 0.5)]), &s(&[("final", 0.5)]), 0.75).is_err());
    }
}
