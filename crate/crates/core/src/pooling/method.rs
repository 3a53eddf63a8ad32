use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::hr::{check_w, hr_label, hr_pool, hr_stat, NullQuantileTable};
use super::order::ord_pool;
use super::quantile::{
    check_weights, chi_pool, fisher_pool, gamma_pool_raw, pearson_pool, stouffer_pool,
    stouffer_pool_weighted,
};

/// A pooling method and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MethodKind {
    /// k-th order statistic; k = 1 is Tippett's pooler.
    Order { k: usize },
    Stouffer,
    Fisher,
    Pearson,
    Gamma { k: f64, theta: f64 },
    Chi { kappa: f64 },
    Hr { w: f64 },
}

/// A pooling method with optional per-test weights c_i.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec {
    pub kind: MethodKind,
    pub weights: Option<Vec<f64>>,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl MethodKind {
    fn validate(&self) -> Result<()> {
        match *self {
            MethodKind::Order { k: 0 } => Err(Error::domain("order k must be ≥ 1")),
            MethodKind::Gamma { k, theta } => {
                positive("gamma shape k", k)?;
                positive("gamma scale θ", theta)
            }
            MethodKind::Chi { kappa } => {
                if kappa == 0.0 {
                    Ok(())
                } else {
                    positive("κ", kappa)
                }
            }
            MethodKind::Hr { w } => check_w(w),
            _ => Ok(()),
        }
    }

    fn is_quantile(&self) -> bool {
        !matches!(self, MethodKind::Order { .. } | MethodKind::Hr { .. })
    }
}

impl MethodSpec {
    pub fn new(kind: MethodKind) -> Result<Self> {
        kind.validate()?;
        Ok(MethodSpec { kind, weights: None })
    }

    /// Attaches weights. Only quantile poolers take weights, and only
    /// Stouffer's has a closed-form null for unequal ones.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights, weights.len())?;
        if !self.kind.is_quantile() {
            return Err(Error::domain(format!("{} does not take weights", self.label())));
        }
        let uniform = weights.windows(2).all(|w| w[0] == w[1]);
        if !uniform && self.kind != MethodKind::Stouffer {
            return Err(Error::domain(format!(
                "unequal weights are only supported for stouffer, not {}",
                self.label()
            )));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    /// Short text form, also accepted by [`FromStr`].
    pub fn label(&self) -> String {
        match self.kind {
            MethodKind::Order { k } => format!("order(k={k})"),
            MethodKind::Stouffer => "stouffer".into(),
            MethodKind::Fisher => "fisher".into(),
            MethodKind::Pearson => "pearson".into(),
            MethodKind::Gamma { k, theta } => format!("gamma(k={k},theta={theta})"),
            MethodKind::Chi { kappa } => format!("chi(kappa={kappa})"),
            MethodKind::Hr { w } => hr_label(w),
        }
    }

    /// κ for chi, w for hr, k for order and gamma.
    pub fn parameter(&self) -> Option<f64> {
        match self.kind {
            MethodKind::Order { k } => Some(k as f64),
            MethodKind::Gamma { k, .. } => Some(k),
            MethodKind::Chi { kappa } => Some(kappa),
            MethodKind::Hr { w } => Some(w),
            _ => None,
        }
    }

    /// Whether pooling needs a simulated null table.
    pub fn needs_table(&self) -> bool {
        matches!(self.kind, MethodKind::Hr { .. })
    }

    /// Pooled p-value. `table` is required for hr and ignored otherwise.
    pub fn pool(&self, p: &[f64], table: Option<&NullQuantileTable>) -> Result<f64> {
        if p.is_empty() {
            return Err(Error::domain("at least one p-value is required"));
        }
        if let Some(w) = &self.weights {
            check_weights(w, p.len())?;
        }
        match self.kind {
            MethodKind::Order { k } => ord_pool(p, k),
            MethodKind::Stouffer => match &self.weights {
                Some(w) => stouffer_pool_weighted(p, w),
                None => Ok(stouffer_pool(p)),
            },
            MethodKind::Fisher => Ok(fisher_pool(p)),
            MethodKind::Pearson => Ok(pearson_pool(p)),
            MethodKind::Gamma { k, theta } => Ok(gamma_pool_raw(p, k, theta)),
            MethodKind::Chi { kappa } => chi_pool(p, kappa),
            MethodKind::Hr { w } => {
                let table = table.ok_or_else(|| {
                    Error::domain(format!("{} needs a simulated null table", self.label()))
                })?;
                hr_pool(p, w, table)
            }
        }
    }

    /// The statistic whose small values are evidence: hr_stat for hr and the
    /// pooled p-value itself for closed-form methods.
    pub fn statistic(&self, p: &[f64]) -> Result<f64> {
        match self.kind {
            MethodKind::Hr { w } => Ok(hr_stat(p, w)),
            _ => self.pool(p, None),
        }
    }
}

impl From<MethodKind> for MethodSpec {
    fn from(kind: MethodKind) -> Self {
        MethodSpec { kind, weights: None }
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn parse_params(body: &str) -> Result<Vec<(&str, &str)>> {
    body.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::domain(format!("expected key=value, got '{kv}'")))
        })
        .collect()
}

fn param(params: &[(&str, &str)], key: &str) -> Result<f64> {
    let (_, v) = params
        .iter()
        .find(|(k, _)| *k == key)
        .ok_or_else(|| Error::domain(format!("missing parameter '{key}'")))?;
    v.parse::<f64>()
        .map_err(|_| Error::domain(format!("parameter '{key}' is not a number: '{v}'")))
}

impl FromStr for MethodSpec {
    type Err = Error;

    /// Parses labels such as `stouffer`, `tippett`, `order(k=3)`,
    /// `chi(kappa=2)`, `gamma(k=1,theta=2)` or `hr(w=0.5)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, body) = match s.split_once('(') {
            Some((name, rest)) => {
                let body = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::domain(format!("unbalanced parentheses in '{s}'")))?;
                (name.trim(), body)
            }
            None => (s, ""),
        };
        let params = parse_params(body)?;
        let kind = match name.to_ascii_lowercase().as_str() {
            "tippett" => MethodKind::Order { k: 1 },
            "order" => {
                let k = param(&params, "k")?;
                if k.fract() != 0.0 || k < 1.0 {
                    return Err(Error::domain(format!("order k must be a positive integer, got {k}")));
                }
                MethodKind::Order { k: k as usize }
            }
            "stouffer" => MethodKind::Stouffer,
            "fisher" => MethodKind::Fisher,
            "pearson" => MethodKind::Pearson,
            "gamma" => MethodKind::Gamma {
                k: param(&params, "k")?,
                theta: param(&params, "theta")?,
            },
            "chi" => MethodKind::Chi {
                kappa: param(&params, "kappa")?,
            },
            "hr" => MethodKind::Hr {
                w: param(&params, "w")?,
            },
            other => return Err(Error::domain(format!("unknown method '{other}'"))),
        };
        MethodSpec::new(kind)
    }
}
