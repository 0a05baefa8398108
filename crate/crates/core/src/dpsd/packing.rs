use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DpsdError;
use crate::linalg::{Mat, SymMat};

/// A family of pairwise disjoint nonempty subsets of `{0, …, n-1}`.
///
/// Stored canonically: elements ascending inside each part, parts ordered by
/// their smallest element. The text form is 1-based, e.g. `5; {1,4},{2,3,5}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Packing {
    n: usize,
    parts: Vec<Vec<usize>>,
}

impl Packing {
    pub fn new(n: usize, mut parts: Vec<Vec<usize>>) -> Result<Self, DpsdError> {
        let mut seen = vec![false; n];
        for p in &mut parts {
            if p.is_empty() {
                return Err(DpsdError::Precondition("packing part is empty".into()));
            }
            p.sort_unstable();
            for &e in p.iter() {
                if e >= n {
                    return Err(DpsdError::Precondition(format!("element {} exceeds n = {n}", e + 1)));
                }
                if seen[e] {
                    return Err(DpsdError::Precondition(format!("element {} appears twice", e + 1)));
                }
                seen[e] = true;
            }
        }
        parts.sort_unstable_by_key(|p| p[0]);
        Ok(Packing { n, parts })
    }

    pub fn empty(n: usize) -> Self {
        Packing { n, parts: Vec::new() }
    }

    /// Packing read off a label vector: `labels[i] = Some(c)` puts `i` in part `c`.
    pub fn from_labels(labels: &[Option<usize>]) -> Self {
        let k = labels.iter().flatten().max().map_or(0, |m| m + 1);
        let mut parts = vec![Vec::new(); k];
        for (i, l) in labels.iter().enumerate() {
            if let Some(c) = l {
                parts[*c].push(i);
            }
        }
        parts.retain(|p| !p.is_empty());
        Packing::new(labels.len(), parts).expect("labels define disjoint parts")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Number of parts, which is the rank of [`Packing::matrix`].
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Elements in no part.
    pub fn uncovered(&self) -> Vec<usize> {
        let mut covered = vec![false; self.n];
        for p in &self.parts {
            for &e in p {
                covered[e] = true;
            }
        }
        (0..self.n).filter(|&i| !covered[i]).collect()
    }

    /// `Σ_S 1_S 1_Sᵀ`.
    pub fn matrix(&self) -> SymMat {
        let mut m = SymMat::zeros(self.n);
        for p in &self.parts {
            for &a in p {
                for &b in p {
                    if a >= b {
                        m.set(a, b, 1.0);
                    }
                }
            }
        }
        m
    }

    /// The `n × k` indicator matrix `P` with `P Pᵀ` equal to [`Packing::matrix`].
    /// Columns past the number of parts stay zero.
    pub fn indicator(&self, k: usize) -> Mat {
        assert!(k >= self.parts.len(), "need at least one column per part");
        let mut p = Mat::zeros(self.n, k);
        for (c, part) in self.parts.iter().enumerate() {
            for &e in part {
                p[(e, c)] = 1.0;
            }
        }
        p
    }

    /// Relabels elements: element `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let parts = self.parts.iter().map(|p| p.iter().map(|&e| perm[e]).collect()).collect();
        Packing::new(self.n, parts).expect("relabeling keeps parts disjoint")
    }
}

impl fmt::Display for Packing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.n)?;
        for (k, p) in self.parts.iter().enumerate() {
            let items: Vec<String> = p.iter().map(|e| (e + 1).to_string()).collect();
            write!(f, "{}{{{}}}", if k == 0 { " " } else { "," }, items.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Packing {
    type Err = DpsdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| DpsdError::Precondition(format!("packing `{s}`: {m}"));
        let (n, rest) = s.split_once(';').ok_or_else(|| bad("missing `;`"))?;
        let n: usize = n.trim().parse().map_err(|_| bad("bad size"))?;
        let rest = rest.trim();
        let mut parts = Vec::new();
        if !rest.is_empty() {
            let body = rest
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| bad("parts must be braced"))?;
            for part in body.split("},") {
                let part = part.trim().trim_start_matches('{');
                let elems = part
                    .split(',')
                    .map(|e| match e.trim().parse::<usize>() {
                        Ok(v) if v >= 1 => Ok(v - 1),
                        _ => Err(bad("elements are 1-based integers")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                parts.push(elems);
            }
        }
        Packing::new(n, parts)
    }
}
