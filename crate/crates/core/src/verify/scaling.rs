use serde::{Deserialize, Serialize};

use super::harness::Family;
use crate::builders::choose_level;
use crate::circuit::normalize_to_gadget_form;
use crate::error::{Error, Result};

/// Threshold per width: fixed, or `max(1, floor(n num / den))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TRule {
    Fixed(usize),
    Fraction { num: usize, den: usize },
}

impl TRule {
    pub fn of(&self, n: usize) -> usize {
        match *self {
            TRule::Fixed(t) => t,
            TRule::Fraction { num, den } => (n * num / den).clamp(1, n.max(1)),
        }
    }

    /// Parses `5`, `n`, `n/2` or `3n/4`.
    pub fn parse(s: &str) -> Option<TRule> {
        let s = s.trim();
        if let Ok(t) = s.parse() {
            return Some(TRule::Fixed(t));
        }
        let (head, den) = match s.split_once('/') {
            Some((h, d)) => (h, d.trim().parse().ok().filter(|&d: &usize| d > 0)?),
            None => (s, 1),
        };
        let num = head.trim().strip_suffix('n')?.trim();
        let num = if num.is_empty() { 1 } else { num.parse().ok()? };
        Some(TRule::Fraction { num, den })
    }
}

/// Families swept by [`scaling_table`], each with its size bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ScalingFamily {
    /// Bound `n`.
    Parity,
    /// Bound `n log2 n`.
    Or,
    /// Bound `n log2 n`.
    And,
    /// Bound `n log2 n`.
    OrBlocked { c: usize },
    /// Bound `n 2^n`.
    OrExp,
    /// Bound `n log2 n`.
    Exact { t: TRule },
    /// Bound `n^2`.
    Counting,
    /// Bound `n min(t, n-t+1) log2 n`.
    ThresholdExactsum { t: TRule },
    /// Bound `n sqrt(min(t, n-t+1) log2 n)`, with `l` from [`choose_level`].
    ThresholdCombined { t: TRule },
}

impl ScalingFamily {
    fn family(&self, n: usize) -> Family {
        match *self {
            ScalingFamily::Parity => Family::Parity { mask: None },
            ScalingFamily::Or => Family::Or,
            ScalingFamily::And => Family::And,
            ScalingFamily::OrBlocked { c } => Family::OrBlocked { c },
            ScalingFamily::OrExp => Family::OrExp,
            ScalingFamily::Exact { t } => Family::Exact { t: t.of(n) },
            ScalingFamily::Counting => Family::Counting { l: None },
            ScalingFamily::ThresholdExactsum { t } => Family::ThresholdExactsum { t: t.of(n) },
            ScalingFamily::ThresholdCombined { t } => Family::ThresholdCombined {
                t: t.of(n),
                l: None,
            },
        }
    }

    fn t(&self, n: usize) -> Option<usize> {
        match *self {
            ScalingFamily::Exact { t }
            | ScalingFamily::ThresholdExactsum { t }
            | ScalingFamily::ThresholdCombined { t } => Some(t.of(n)),
            _ => None,
        }
    }

    pub fn bound(&self, n: usize) -> f64 {
        let nf = n as f64;
        let lg = nf.log2().max(1.0);
        let near = |t: usize| t.min(n + 1 - t) as f64;
        match *self {
            ScalingFamily::Parity => nf,
            ScalingFamily::Or
            | ScalingFamily::And
            | ScalingFamily::OrBlocked { .. }
            | ScalingFamily::Exact { .. } => nf * lg,
            ScalingFamily::OrExp => nf * 2f64.powi(n as i32),
            ScalingFamily::Counting => nf * nf,
            ScalingFamily::ThresholdExactsum { t } => nf * near(t.of(n)) * lg,
            ScalingFamily::ThresholdCombined { t } => nf * (near(t.of(n)) * lg).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub t: Option<usize>,
    pub l: Option<usize>,
    pub elementary_size: usize,
    pub depth: usize,
    pub qubit_count: usize,
    pub bound_value: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub family: ScalingFamily,
    pub rows: Vec<ScalingRow>,
    /// Whether every row has the same depth.
    pub depth_constant: bool,
    /// `max ratio / min ratio`.
    pub ratio_spread: f64,
    /// Whether the ratio ever exceeds twice its minimum.
    pub ratio_flag: bool,
}

/// Gadget-form metrics of the family at each `n`, against its bound.
pub fn scaling_table(family: ScalingFamily, ns: &[usize]) -> Result<ScalingTable> {
    if ns.is_empty() {
        return Err(Error::InvalidParameter("empty n list".into()));
    }
    let rows = ns
        .iter()
        .map(|&n| {
            let c = normalize_to_gadget_form(&family.family(n).build(n)?);
            let m = c.metrics()?;
            let bound_value = family.bound(n);
            let t = family.t(n);
            Ok(ScalingRow {
                n,
                t,
                l: matches!(family, ScalingFamily::ThresholdCombined { .. })
                    .then(|| choose_level(n, t.unwrap_or(1))),
                elementary_size: m.elementary_size,
                depth: m.depth,
                qubit_count: c.qubit_count,
                bound_value,
                ratio: m.elementary_size as f64 / bound_value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(ScalingTable {
        family,
        depth_constant: rows.iter().all(|r| r.depth == rows[0].depth),
        ratio_spread: max / min,
        ratio_flag: max > 2.0 * min,
        rows,
    })
}

impl ScalingTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)
                .map_err(|e| Error::Serialization(e.to_string()))?;
        }
        String::from_utf8(
            w.into_inner()
                .map_err(|e| Error::Serialization(e.to_string()))?,
        )
        .map_err(|e| Error::Serialization(e.to_string()))
    }
}
