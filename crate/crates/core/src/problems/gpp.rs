use serde::{Deserialize, Serialize};

use super::qap::Hollow;
use super::Graph;
use crate::formulations::{qmp2_lift, BuildError};
use crate::model::{Diagonal, MisdpModel, PencilBuilder, Relation, VarDomain};

/// Partition the vertices into `k` labeled sets of the given sizes (each at
/// least 1). Order matters only for the general and orthogonal models,
/// where part `j` gets size `sizes[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GppInstance {
    pub graph: Graph,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GppVariant {
    /// `P` and `X` with `[[I_k, Pᵀ],[P, X]] ⪰ 0`.
    General,
    /// `kX − J ⪰ 0`, `X1 = (n/k)1`; needs equal sizes.
    Equipartition,
    /// `2X − J ⪰ 0`, `⟨J, X⟩ = m₁² + (n−m₁)²`; needs `k = 2`.
    Bisection,
    /// `P` binary with `X₁ ⪰ PPᵀ`, `X₂ ⪰ PᵀP`, `X₂ = Diag(m)`.
    Orthogonal,
}

impl GppVariant {
    pub const ALL: [GppVariant; 4] =
        [GppVariant::General, GppVariant::Equipartition, GppVariant::Bisection, GppVariant::Orthogonal];

    pub fn name(self) -> &'static str {
        match self {
            GppVariant::General => "general",
            GppVariant::Equipartition => "equipartition",
            GppVariant::Bisection => "bisection",
            GppVariant::Orthogonal => "orthogonal",
        }
    }
}

impl std::str::FromStr for GppVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        GppVariant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| format!("unknown GPP variant `{s}`"))
    }
}

impl GppInstance {
    pub fn new(graph: Graph, sizes: Vec<usize>) -> Result<Self, BuildError> {
        let g = GppInstance { graph, sizes };
        g.validate()?;
        Ok(g)
    }

    /// `k` equal parts.
    pub fn equipartition(graph: Graph, k: usize) -> Result<Self, BuildError> {
        let n = graph.n();
        if k == 0 || n % k != 0 {
            return Err(BuildError::VariantPrecondition(format!("{k} does not divide {n}")));
        }
        Self::new(graph, vec![n / k; k])
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        let total: usize = self.sizes.iter().sum();
        if total != self.n() {
            return Err(BuildError::SizeMismatch(format!("sizes sum to {total}, graph has {} vertices", self.n())));
        }
        if self.sizes.iter().any(|&s| s == 0) {
            return Err(BuildError::SizeMismatch("every part needs at least one vertex".into()));
        }
        Ok(())
    }

    pub fn is_equal_sized(&self) -> bool {
        self.sizes.windows(2).all(|w| w[0] == w[1])
    }
}

/// Builds one of the four graph-partition models. All minimize
/// `½⟨L, X⟩` (`½⟨L, X₁⟩` for the orthogonal variant), the weight of the
/// edges cut by the partition.
pub fn build_gpp(inst: &GppInstance, variant: GppVariant) -> Result<MisdpModel, BuildError> {
    inst.validate()?;
    let (n, k) = (inst.n(), inst.k());
    let lap = inst.graph.laplacian();
    let half = lap.scale(0.5);
    let mut m = MisdpModel::new(format!("gpp-{}", variant.name()));
    match variant {
        GppVariant::General => {
            let l = qmp2_lift(&mut m, n, k, true);
            let (obj, c) = l.x.inner(&half);
            m.minimize(obj, c);
            for (j, &mj) in inst.sizes.iter().enumerate() {
                let terms = (0..n).map(|i| (l.p.get(i, j), 1.0)).collect();
                m.add_row(format!("size[{}]", j + 1), terms, Relation::Eq, mj as f64);
            }
        }
        GppVariant::Equipartition | GppVariant::Bisection => {
            if variant == GppVariant::Equipartition && !inst.is_equal_sized() {
                return Err(BuildError::VariantPrecondition("equipartition needs equal part sizes".into()));
            }
            if variant == GppVariant::Bisection && k != 2 {
                return Err(BuildError::VariantPrecondition(format!("bisection needs k = 2, got {k}")));
            }
            let x = m.add_sym_matrix("X", n, Diagonal::Fixed(1.0), VarDomain::Binary);
            let (obj, c) = x.inner(&half);
            m.minimize(obj, c);
            if variant == GppVariant::Equipartition {
                for i in 0..n {
                    let (terms, c) = x.row_times(i, &vec![1.0; n]);
                    m.add_row(format!("rowsum[{}]", i + 1), terms, Relation::Eq, (n / k) as f64 - c);
                }
            } else {
                let m1 = inst.sizes[0].min(inst.sizes[1]);
                let (terms, c) = x.inner(&crate::linalg::SymMat::ones(n));
                let target = (m1 * m1 + (n - m1) * (n - m1)) as f64;
                m.add_row("total", terms, Relation::Eq, target - c);
            }
            let mut pb = PencilBuilder::new(n);
            x.add_to_pencil(&mut pb, 0, k as f64);
            for i in 0..n {
                for j in i..n {
                    pb.constant(i, j, -1.0);
                }
            }
            m.add_pencil(pb.build("spread"));
        }
        GppVariant::Orthogonal => {
            let p = m.add_matrix("P", n, k, VarDomain::Binary);
            let x1 = m.add_sym_matrix("X1", n, Diagonal::Fixed(1.0), VarDomain::free());
            let x2 = m.add_sym_matrix("X2", k, Diagonal::Own(VarDomain::free()), VarDomain::free());
            let (obj, c) = x1.inner(&half);
            m.minimize(obj, c);
            for i in 0..n {
                m.add_row(format!("assign[{}]", i + 1), (0..k).map(|j| (p.get(i, j), 1.0)).collect(), Relation::Eq, 1.0);
            }
            for (a, b, e) in x2.upper() {
                let v = match e {
                    crate::model::Entry::Var(v) => v,
                    crate::model::Entry::Const(_) => unreachable!("X2 has its own diagonal"),
                };
                let rhs = if a == b { inst.sizes[a] as f64 } else { 0.0 };
                m.add_row(format!("X2[{},{}]", a + 1, b + 1), vec![(v, 1.0)], Relation::Eq, rhs);
            }
            let mut pb = PencilBuilder::new(k + n);
            for j in 0..k {
                pb.constant(j, j, 1.0);
            }
            for i in 0..n {
                for j in 0..k {
                    pb.var(p.get(i, j), k + i, j, 1.0);
                }
            }
            x1.add_to_pencil(&mut pb, k, 1.0);
            m.add_pencil(pb.build("rows"));
            let mut pb = PencilBuilder::new(n + k);
            for i in 0..n {
                pb.constant(i, i, 1.0);
            }
            for i in 0..n {
                for j in 0..k {
                    pb.var(p.get(i, j), i, n + j, 1.0);
                }
            }
            x2.add_to_pencil(&mut pb, n, 1.0);
            m.add_pencil(pb.build("columns"));
        }
    }
    m.canonicalize();
    Ok(m)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KepOptions {
    /// Replace `(m−1)I − X₂ ⪰ 0` by the rows `X₂1 = (m−1)1`.
    #[serde(default)]
    pub row_form: bool,
}

/// k-equipartition through its association scheme: `X₂` binary (same part),
/// `X₁ ≥ 0` (different parts), `I + X₁ + X₂ = J`,
/// `(m−1)I − X₂ ⪰ 0` and `(k−1)I − X₁ + (k−1)X₂ ⪰ 0`.
///
/// The objective is `½⟨W, X₁⟩` so that it equals the cut weight and matches
/// the other partition models.
pub fn build_kep_assoc(inst: &GppInstance, opts: KepOptions) -> Result<MisdpModel, BuildError> {
    inst.validate()?;
    if !inst.is_equal_sized() {
        return Err(BuildError::SizeMismatch("parts must have equal size".into()));
    }
    let (n, k) = (inst.n(), inst.k());
    let mm = n / k;
    let w = inst.graph.weights();
    let mut m = MisdpModel::new("kep-assoc");
    let x1 = Hollow::new(&mut m, "X1", n, VarDomain::nonneg());
    let x2 = Hollow::new(&mut m, "X2", n, VarDomain::Binary);
    m.minimize(x1.half_inner(&w), 0.0);
    for (i, j, v) in x1.pairs() {
        m.add_row(format!("sum[{},{}]", i + 1, j + 1), vec![(v, 1.0), (x2.get(i, j), 1.0)], Relation::Eq, 1.0);
    }
    if opts.row_form {
        for i in 0..n {
            m.add_row(format!("degree[{}]", i + 1), x2.row_sum(i), Relation::Eq, (mm - 1) as f64);
        }
    } else {
        let mut pb = PencilBuilder::new(n);
        for i in 0..n {
            pb.constant(i, i, (mm - 1) as f64);
        }
        x2.add_to_pencil(&mut pb, -1.0);
        m.add_pencil(pb.build("within"));
    }
    let mut pb = PencilBuilder::new(n);
    for i in 0..n {
        pb.constant(i, i, (k - 1) as f64);
    }
    x1.add_to_pencil(&mut pb, -1.0);
    x2.add_to_pencil(&mut pb, (k - 1) as f64);
    m.add_pencil(pb.build("across"));
    m.canonicalize();
    Ok(m)
}
