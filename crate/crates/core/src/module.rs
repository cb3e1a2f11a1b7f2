//! Finite free conformal modules presented by action tables.
//!
//! A rank-`k` module stores, per generator, the `k×k` matrix `F(∂,λ)` with
//! `a λ Y = Y·F(∂,λ)` on the basis row `Y`. Structured recipes (the module
//! families plus direct sums and constant basis changes) materialize their
//! tables on demand and are exact at every degree; explicit tables carry a
//! cutoff.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gc::{bracket_terms, GcElement};
use crate::matrix::PolyMatrix;
use crate::poly::{MPoly, Var};
use crate::scalar::Scalar;
use crate::virasoro;

/// Which algebra a module is over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    /// The rank-one Virasoro conformal algebra with generator `L`.
    Vir,
    /// The Heisenberg–Virasoro subalgebra of `gc_1`, spanned by `J^0`, `J^1`.
    Hv,
    /// `gc_N`; the payload is `N`.
    Gc(usize),
}

/// Generator key for action tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenKey {
    /// `L` of the Virasoro algebra.
    VirL,
    /// `J^n` of the Heisenberg–Virasoro algebra, `n ∈ {0, 1}`.
    Hv(u32),
    /// `J^n_{E_ij}` of `gc_N`, zero-based unit indices.
    GcUnit(u32, usize, usize),
}

impl GenKey {
    fn describe(&self) -> String {
        match self {
            GenKey::VirL => "L".into(),
            GenKey::Hv(n) => format!("J^{n}"),
            GenKey::GcUnit(n, i, j) => format!("J^{}_E{}{}", n, i + 1, j + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Recipe {
    VirModule {
        delta: Scalar,
        alpha: Scalar,
    },
    HvModule {
        delta: Scalar,
        alpha: Scalar,
        beta: Scalar,
    },
    GcStandard {
        alpha: Scalar,
    },
    GcDual {
        alpha: Scalar,
    },
    DirectSum(Vec<ConformalModule>),
    BasisChange {
        inner: Box<ConformalModule>,
        change: PolyMatrix,
        inverse: PolyMatrix,
    },
    Explicit {
        n_max: u32,
        tables: BTreeMap<GenKey, PolyMatrix>,
    },
}

/// A finite free conformal module with its presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalModule {
    algebra: AlgebraKind,
    rank: usize,
    recipe: Recipe,
}

/// Witness of a failed module-axiom check: the commutator of the two listed
/// generators does not match the bracket action.
#[derive(Debug, Clone, Serialize)]
pub struct ActionWitness {
    pub left: String,
    pub right: String,
    pub m: u32,
    pub n: u32,
    /// Commutator side minus bracket side, as a `k×k` matrix over `(∂,λ,μ)`.
    pub residual: PolyMatrix,
}

impl ConformalModule {
    /// `M_{Δ,α}` over the Virasoro algebra: `L λ v = (∂+Δλ+α)v`.
    pub fn vir_module(delta: Scalar, alpha: Scalar) -> Self {
        ConformalModule {
            algebra: AlgebraKind::Vir,
            rank: 1,
            recipe: Recipe::VirModule { delta, alpha },
        }
    }

    /// Rank-one module over the Heisenberg–Virasoro algebra:
    /// `J^1 λ v = (∂+Δλ+α)v`, `J^0 λ v = βv`.
    pub fn hv_module(delta: Scalar, alpha: Scalar, beta: Scalar) -> Self {
        ConformalModule {
            algebra: AlgebraKind::Hv,
            rank: 1,
            recipe: Recipe::HvModule { delta, alpha, beta },
        }
    }

    /// The standard module of `gc_N`: `J^n_A λ v = (∂+λ+α)^n Av`.
    pub fn gc_standard(n: usize, alpha: Scalar) -> Self {
        ConformalModule {
            algebra: AlgebraKind::Gc(n),
            rank: n,
            recipe: Recipe::GcStandard { alpha },
        }
    }

    /// The dual-family module of `gc_N`: `J^n_A λ v = −(−∂+α)^n Aᵀv`.
    pub fn gc_dual(n: usize, alpha: Scalar) -> Self {
        ConformalModule {
            algebra: AlgebraKind::Gc(n),
            rank: n,
            recipe: Recipe::GcDual { alpha },
        }
    }

    /// Direct sum; parts must live over the same algebra.
    pub fn direct_sum(parts: Vec<ConformalModule>) -> Result<Self, Error> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidInput("direct sum of no modules".into()));
        };
        let algebra = first.algebra;
        if parts.iter().any(|p| p.algebra != algebra) {
            return Err(Error::DimensionMismatch(
                "direct sum over mixed algebras".into(),
            ));
        }
        let rank = parts.iter().map(|p| p.rank).sum();
        Ok(ConformalModule {
            algebra,
            rank,
            recipe: Recipe::DirectSum(parts),
        })
    }

    /// Basis change by a constant invertible matrix `U`: tables become
    /// `U⁻¹ F U` (the new basis is `Y·U`).
    pub fn basis_change(self, change: PolyMatrix) -> Result<Self, Error> {
        if change.rows() != self.rank || change.cols() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "basis change {}x{} on a rank-{} module",
                change.rows(),
                change.cols(),
                self.rank
            )));
        }
        if !change.is_constant() {
            return Err(Error::NotConstant);
        }
        let inverse = change.inverse()?;
        Ok(ConformalModule {
            algebra: self.algebra,
            rank: self.rank,
            recipe: Recipe::BasisChange {
                inner: Box::new(self),
                change,
                inverse,
            },
        })
    }

    /// Module given by explicit tables, valid for degrees up to `n_max`.
    /// Missing generator keys act as zero.
    pub fn explicit(
        algebra: AlgebraKind,
        rank: usize,
        n_max: u32,
        tables: BTreeMap<GenKey, PolyMatrix>,
    ) -> Result<Self, Error> {
        for (key, m) in &tables {
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "table for {} is {}x{}, expected {rank}x{rank}",
                    key.describe(),
                    m.rows(),
                    m.cols()
                )));
            }
            let bad_key = match (algebra, key) {
                (AlgebraKind::Vir, GenKey::VirL) => false,
                (AlgebraKind::Hv, GenKey::Hv(n)) => *n > 1,
                (AlgebraKind::Gc(n), GenKey::GcUnit(deg, i, j)) => {
                    *deg > n_max || *i >= n || *j >= n
                }
                _ => true,
            };
            if bad_key {
                return Err(Error::InvalidInput(format!(
                    "table key {} does not fit the algebra",
                    key.describe()
                )));
            }
            for i in 0..rank {
                for j in 0..rank {
                    if m[(i, j)].degree_in(Var::Mu) > 0 {
                        return Err(Error::InvalidInput(
                            "action tables live in (∂, λ) only".into(),
                        ));
                    }
                }
            }
        }
        Ok(ConformalModule {
            algebra,
            rank,
            recipe: Recipe::Explicit { n_max, tables },
        })
    }

    pub fn algebra(&self) -> AlgebraKind {
        self.algebra
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Whether the presentation is recipe-built (actions exact at every
    /// degree) as opposed to an explicit table with a cutoff.
    pub fn is_recipe_exact(&self) -> bool {
        match &self.recipe {
            Recipe::Explicit { .. } => false,
            Recipe::DirectSum(parts) => parts.iter().all(|p| p.is_recipe_exact()),
            Recipe::BasisChange { inner, .. } => inner.is_recipe_exact(),
            _ => true,
        }
    }

    /// Generator keys of the underlying algebra, degrees up to `n_max` for
    /// `gc_N`.
    pub fn generator_keys(&self, n_max: u32) -> Vec<GenKey> {
        match self.algebra {
            AlgebraKind::Vir => vec![GenKey::VirL],
            AlgebraKind::Hv => vec![GenKey::Hv(0), GenKey::Hv(1)],
            AlgebraKind::Gc(n) => {
                let mut keys = Vec::new();
                for deg in 0..=n_max {
                    for i in 0..n {
                        for j in 0..n {
                            keys.push(GenKey::GcUnit(deg, i, j));
                        }
                    }
                }
                keys
            }
        }
    }

    /// Action matrix of one generator.
    pub fn act_key(&self, key: &GenKey) -> Result<PolyMatrix, Error> {
        match (&self.algebra, key) {
            (AlgebraKind::Vir, GenKey::VirL)
            | (AlgebraKind::Hv, GenKey::Hv(_))
            | (AlgebraKind::Gc(_), GenKey::GcUnit(..)) => {}
            _ => {
                return Err(Error::InvalidInput(format!(
                    "generator {} does not act on this module",
                    key.describe()
                )))
            }
        }
        if let (AlgebraKind::Hv, GenKey::Hv(n)) = (&self.algebra, key) {
            if *n > 1 {
                return Err(Error::InvalidInput("HV has generators J^0, J^1".into()));
            }
        }
        if let (AlgebraKind::Gc(n), GenKey::GcUnit(_, i, j)) = (&self.algebra, key) {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch("matrix unit out of range".into()));
            }
        }
        self.act_key_inner(key)
    }

    fn act_key_inner(&self, key: &GenKey) -> Result<PolyMatrix, Error> {
        match &self.recipe {
            Recipe::VirModule { delta, alpha } => {
                let mut m = PolyMatrix::zeros(1, 1);
                m[(0, 0)] = regular_entry(delta, alpha);
                Ok(m)
            }
            Recipe::HvModule { delta, alpha, beta } => {
                let GenKey::Hv(n) = key else { unreachable!() };
                let mut m = PolyMatrix::zeros(1, 1);
                m[(0, 0)] = if *n == 0 {
                    MPoly::constant(beta.clone())
                } else {
                    regular_entry(delta, alpha)
                };
                Ok(m)
            }
            Recipe::GcStandard { alpha } => {
                let GenKey::GcUnit(deg, i, j) = key else {
                    unreachable!()
                };
                let base = &(&MPoly::del() + &MPoly::lambda()) + &MPoly::constant(alpha.clone());
                let n = self.rank;
                Ok(PolyMatrix::unit(n, *i, *j).scale_poly(&base.pow(*deg)))
            }
            Recipe::GcDual { alpha } => {
                let GenKey::GcUnit(deg, i, j) = key else {
                    unreachable!()
                };
                let base = &MPoly::constant(alpha.clone()) - &MPoly::del();
                let n = self.rank;
                // −(−∂+α)^deg · E_ijᵀ = −(−∂+α)^deg · E_ji
                Ok(-&PolyMatrix::unit(n, *j, *i).scale_poly(&base.pow(*deg)))
            }
            Recipe::DirectSum(parts) => {
                let blocks: Result<Vec<PolyMatrix>, Error> =
                    parts.iter().map(|p| p.act_key_inner(key)).collect();
                Ok(PolyMatrix::block_diag(&blocks?))
            }
            Recipe::BasisChange {
                inner,
                change,
                inverse,
            } => {
                let f = inner.act_key_inner(key)?;
                Ok(&(inverse * &f) * change)
            }
            Recipe::Explicit { n_max, tables } => {
                if let GenKey::GcUnit(deg, _, _) = key {
                    if deg > n_max {
                        return Err(Error::CutoffExceeded {
                            n: *deg,
                            n_max: *n_max,
                        });
                    }
                }
                Ok(tables
                    .get(key)
                    .cloned()
                    .unwrap_or_else(|| PolyMatrix::zeros(self.rank, self.rank)))
            }
        }
    }

    /// Action of `J^n_A` for an arbitrary constant matrix `A`, extended
    /// linearly from matrix units.
    pub fn act_gc(&self, n: u32, a: &PolyMatrix) -> Result<PolyMatrix, Error> {
        let AlgebraKind::Gc(size) = self.algebra else {
            return Err(Error::InvalidInput("not a gc module".into()));
        };
        if a.rows() != size || a.cols() != size {
            return Err(Error::DimensionMismatch("acting matrix size".into()));
        }
        let grid = a.to_scalar_grid()?;
        let mut out = PolyMatrix::zeros(self.rank, self.rank);
        for (i, row) in grid.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let f = self.act_key(&GenKey::GcUnit(n, i, j))?;
                out = &out + &f.scale(c);
            }
        }
        Ok(out)
    }

    /// Explicit-table snapshot of this module up to `n_max`.
    pub fn materialize(&self, n_max: u32) -> Result<ConformalModule, Error> {
        let mut tables = BTreeMap::new();
        for key in self.generator_keys(n_max) {
            let f = self.act_key(&key)?;
            if !f.is_zero() {
                tables.insert(key, f);
            }
        }
        ConformalModule::explicit(self.algebra, self.rank, n_max, tables)
    }

    /// Exact equality of action tables up to `n_max`.
    pub fn tables_equal(&self, other: &ConformalModule, n_max: u32) -> Result<bool, Error> {
        if self.algebra != other.algebra || self.rank != other.rank {
            return Ok(false);
        }
        for key in self.generator_keys(n_max) {
            if self.act_key(&key)? != other.act_key(&key)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub(crate) fn regular_entry(delta: &Scalar, alpha: &Scalar) -> MPoly {
    let mut p = MPoly::del();
    p = &p + &MPoly::lambda().scale(delta);
    &p + &MPoly::constant(alpha.clone())
}

/// Action matrix of a whole `gc_N` element: a term `f(∂)J^n_A` contributes
/// `f(−λ)·F_{n,A}(∂,λ)`.
pub fn gc_element_action(m: &ConformalModule, g: &GcElement) -> Result<PolyMatrix, Error> {
    let AlgebraKind::Gc(size) = m.algebra else {
        return Err(Error::InvalidInput("not a gc module".into()));
    };
    if g.size() != size {
        return Err(Error::DimensionMismatch(format!(
            "element of gc_{} on a gc_{} module",
            g.size(),
            size
        )));
    }
    let minus_lambda = -MPoly::lambda();
    let mut out = PolyMatrix::zeros(m.rank, m.rank);
    for (&deg, mat) in g.terms() {
        for i in 0..size {
            for j in 0..size {
                let coeff = &mat[(i, j)];
                if coeff.is_zero() {
                    continue;
                }
                let evaluated = coeff.substitute(Var::Del, &minus_lambda);
                let f = m.act_key(&GenKey::GcUnit(deg, i, j))?;
                out = &out + &f.scale_poly(&evaluated);
            }
        }
    }
    Ok(out)
}

/// Bracket of two generators as a list of `(coefficient(∂,λ), generator)`
/// pairs, used to form the bracket side of the commutator check.
fn generator_bracket(a: &GenKey, b: &GenKey) -> Vec<(MPoly, GenKey)> {
    match (a, b) {
        (GenKey::VirL, GenKey::VirL) => vec![(
            &MPoly::del() + &MPoly::lambda().scale(&Scalar::from_int(2)),
            GenKey::VirL,
        )],
        (GenKey::Hv(m), GenKey::Hv(n)) => gc1_unit_bracket(*m, *n)
            .into_iter()
            .map(|(deg, coeff)| (coeff, GenKey::Hv(deg)))
            .collect(),
        (GenKey::GcUnit(m, i, j), GenKey::GcUnit(n, k, l)) => {
            let size = i.max(j).max(k).max(l) + 1;
            let am = single_term_map(size, *m, *i, *j);
            let bm = single_term_map(size, *n, *k, *l);
            let terms = bracket_terms(&am, &bm, &MPoly::lambda());
            let mut out = Vec::new();
            for (deg, mat) in terms {
                for r in 0..size {
                    for c in 0..size {
                        if !mat[(r, c)].is_zero() {
                            out.push((mat[(r, c)].clone(), GenKey::GcUnit(deg, r, c)));
                        }
                    }
                }
            }
            out
        }
        _ => unreachable!("mixed generator kinds"),
    }
}

fn single_term_map(size: usize, n: u32, i: usize, j: usize) -> BTreeMap<u32, PolyMatrix> {
    let mut m = BTreeMap::new();
    m.insert(n, PolyMatrix::unit(size, i, j));
    m
}

fn gc1_unit_bracket(m: u32, n: u32) -> Vec<(u32, MPoly)> {
    let am = single_term_map(1, m, 0, 0);
    let bm = single_term_map(1, n, 0, 0);
    bracket_terms(&am, &bm, &MPoly::lambda())
        .into_iter()
        .map(|(deg, mat)| (deg, mat[(0, 0)].clone()))
        .collect()
}

fn gen_key_degree(key: &GenKey) -> u32 {
    match key {
        GenKey::VirL => 1,
        GenKey::Hv(n) => *n,
        GenKey::GcUnit(n, _, _) => *n,
    }
}

/// Verifies the commutator identity
/// `[a λ b]_{λ+μ} v = a λ (b μ v) − b μ (a λ v)` for all generator pairs with
/// degrees up to `n_max`, as exact `(∂,λ,μ)`-polynomial matrices.
///
/// Returns the failing pairs as witnesses; an empty list is a pass. The
/// bracket side needs actions at degree up to `2·n_max`, so explicit tables
/// must extend that far or the check reports [`Error::CutoffExceeded`].
pub fn check_module_axioms(
    m: &ConformalModule,
    n_max: u32,
) -> Result<Vec<ActionWitness>, Error> {
    let keys = m.generator_keys(n_max);
    let lam = MPoly::lambda();
    let mu = MPoly::mu();
    let lam_plus_mu = &lam + &mu;
    let minus_lam_mu = -&lam_plus_mu;
    let del_plus_lam = &MPoly::del() + &lam;
    let del_plus_mu = &MPoly::del() + &mu;

    // Precomputed variants of each generator action.
    let mut at_lambda: BTreeMap<GenKey, PolyMatrix> = BTreeMap::new();
    let mut at_mu: BTreeMap<GenKey, PolyMatrix> = BTreeMap::new();
    let mut shifted_lm: BTreeMap<GenKey, PolyMatrix> = BTreeMap::new();
    let mut shifted_ml: BTreeMap<GenKey, PolyMatrix> = BTreeMap::new();
    for key in &keys {
        let f = m.act_key(key)?;
        let f_mu = f.substitute_all(Var::Lambda, &mu);
        shifted_lm.insert(*key, f_mu.substitute_all(Var::Del, &del_plus_lam));
        shifted_ml.insert(*key, f.substitute_all(Var::Del, &del_plus_mu));
        at_mu.insert(*key, f_mu);
        at_lambda.insert(*key, f);
    }

    let mut witnesses = Vec::new();
    for a in &keys {
        for b in &keys {
            // bracket side: coefficients q(∂,λ) of generators, acted with
            // parameter λ+μ: q(−λ−μ, λ) · F_gen(∂, λ+μ)
            let mut bracket_side = PolyMatrix::zeros(m.rank, m.rank);
            for (coeff, gen) in generator_bracket(a, b) {
                let f = m.act_key(&gen)?;
                let f_at = f.substitute_all(Var::Lambda, &lam_plus_mu);
                let q = coeff.substitute(Var::Del, &minus_lam_mu);
                bracket_side = &bracket_side + &f_at.scale_poly(&q);
            }
            let commutator = &(&at_lambda[a] * &shifted_lm[b]) - &(&at_mu[b] * &shifted_ml[a]);
            if bracket_side != commutator {
                witnesses.push(ActionWitness {
                    left: a.describe(),
                    right: b.describe(),
                    m: gen_key_degree(a),
                    n: gen_key_degree(b),
                    residual: &commutator - &bracket_side,
                });
            }
        }
    }
    Ok(witnesses)
}

/// Conformal dual: per generator, `F(∂,λ) ↦ −F(−∂−λ, λ)ᵀ` on the dual basis.
/// The input is materialized up to `n_max` first, so the result is an
/// explicit-table module.
pub fn dual_module(m: &ConformalModule, n_max: u32) -> Result<ConformalModule, Error> {
    let minus_del_lam = -(&MPoly::del() + &MPoly::lambda());
    let mut tables = BTreeMap::new();
    for key in m.generator_keys(n_max) {
        let f = m.act_key(&key)?;
        let g = -&f.substitute_all(Var::Del, &minus_del_lam).transpose();
        if !g.is_zero() {
            tables.insert(key, g);
        }
    }
    ConformalModule::explicit(m.algebra, m.rank, n_max, tables)
}

/// Restriction of a `gc_N`-module along the Virasoro embedding `L ↦ g`.
///
/// `g` must pass the Virasoro test; the result is a module over the Virasoro
/// algebra whose single table is exact (no cutoff), provided the input's
/// tables reach `g`'s degree.
pub fn restrict_to_virasoro(
    g: &GcElement,
    m: &ConformalModule,
) -> Result<ConformalModule, Error> {
    if !virasoro::is_virasoro(g).is_virasoro {
        return Err(Error::NotVirasoro);
    }
    let f = gc_element_action(m, g)?;
    let mut tables = BTreeMap::new();
    if !f.is_zero() {
        tables.insert(GenKey::VirL, f);
    }
    ConformalModule::explicit(AlgebraKind::Vir, m.rank(), 0, tables)
}

/// JSON presentation of a module: algebra, recipe tree, optional top-level
/// basis change.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub algebra: String,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    pub recipe: RecipeSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub basis_change: Option<Vec<Vec<Scalar>>>,
}

/// JSON presentation of a recipe node.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecipeSpec {
    VirModule {
        delta: Scalar,
        alpha: Scalar,
    },
    HvModule {
        delta: Scalar,
        alpha: Scalar,
        beta: Scalar,
    },
    GcStandard {
        alpha: Scalar,
    },
    GcDual {
        alpha: Scalar,
    },
    DirectSum {
        parts: Vec<RecipeSpec>,
    },
    BasisChange {
        inner: Box<RecipeSpec>,
        matrix: Vec<Vec<Scalar>>,
    },
    Explicit {
        rank: usize,
        n_max: u32,
        tables: Vec<TableEntrySpec>,
    },
}

/// One table of an explicit module: `n`, `i`, `j` select the generator
/// (`i`, `j` are 1-based and only used over `gc_N`; Virasoro tables omit all
/// three, Heisenberg–Virasoro ones give `n` only).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableEntrySpec {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<usize>,
    pub matrix: Vec<Vec<MPoly>>,
}

impl ModuleSpec {
    pub fn to_module(&self) -> Result<ConformalModule, Error> {
        let algebra = match (self.algebra.as_str(), self.n) {
            ("vir", _) => AlgebraKind::Vir,
            ("hv", _) => AlgebraKind::Hv,
            ("gc", Some(n)) if n >= 1 => AlgebraKind::Gc(n),
            ("gc", _) => {
                return Err(Error::InvalidInput(
                    "gc modules need a positive \"N\" field".into(),
                ))
            }
            (other, _) => {
                return Err(Error::InvalidInput(format!(
                    "unknown algebra {other:?}, expected \"vir\", \"hv\" or \"gc\""
                )))
            }
        };
        let mut module = build_recipe(&self.recipe, algebra)?;
        if let Some(grid) = &self.basis_change {
            module = module.basis_change(PolyMatrix::from_scalar_grid(grid)?)?;
        }
        Ok(module)
    }

    pub fn from_module(m: &ConformalModule) -> Self {
        let (algebra, n) = match m.algebra() {
            AlgebraKind::Vir => ("vir".to_string(), None),
            AlgebraKind::Hv => ("hv".to_string(), None),
            AlgebraKind::Gc(n) => ("gc".to_string(), Some(n)),
        };
        ModuleSpec {
            algebra,
            n,
            recipe: recipe_spec(m),
            basis_change: None,
        }
    }
}

fn build_recipe(spec: &RecipeSpec, algebra: AlgebraKind) -> Result<ConformalModule, Error> {
    let mismatch = |want: &str| {
        Err(Error::InvalidInput(format!(
            "recipe kind requires the {want} algebra"
        )))
    };
    match spec {
        RecipeSpec::VirModule { delta, alpha } => match algebra {
            AlgebraKind::Vir => Ok(ConformalModule::vir_module(delta.clone(), alpha.clone())),
            _ => mismatch("vir"),
        },
        RecipeSpec::HvModule { delta, alpha, beta } => match algebra {
            AlgebraKind::Hv => Ok(ConformalModule::hv_module(
                delta.clone(),
                alpha.clone(),
                beta.clone(),
            )),
            _ => mismatch("hv"),
        },
        RecipeSpec::GcStandard { alpha } => match algebra {
            AlgebraKind::Gc(n) => Ok(ConformalModule::gc_standard(n, alpha.clone())),
            _ => mismatch("gc"),
        },
        RecipeSpec::GcDual { alpha } => match algebra {
            AlgebraKind::Gc(n) => Ok(ConformalModule::gc_dual(n, alpha.clone())),
            _ => mismatch("gc"),
        },
        RecipeSpec::DirectSum { parts } => {
            let built: Result<Vec<ConformalModule>, Error> =
                parts.iter().map(|p| build_recipe(p, algebra)).collect();
            ConformalModule::direct_sum(built?)
        }
        RecipeSpec::BasisChange { inner, matrix } => {
            let m = build_recipe(inner, algebra)?;
            m.basis_change(PolyMatrix::from_scalar_grid(matrix)?)
        }
        RecipeSpec::Explicit {
            rank,
            n_max,
            tables,
        } => {
            let mut map = BTreeMap::new();
            for t in tables {
                let key = match algebra {
                    AlgebraKind::Vir => GenKey::VirL,
                    AlgebraKind::Hv => GenKey::Hv(t.n.ok_or_else(|| {
                        Error::InvalidInput("hv table entry needs \"n\"".into())
                    })?),
                    AlgebraKind::Gc(size) => {
                        let n = t.n.ok_or_else(|| {
                            Error::InvalidInput("gc table entry needs \"n\"".into())
                        })?;
                        let i = t.i.ok_or_else(|| {
                            Error::InvalidInput("gc table entry needs \"i\"".into())
                        })?;
                        let j = t.j.ok_or_else(|| {
                            Error::InvalidInput("gc table entry needs \"j\"".into())
                        })?;
                        if i == 0 || j == 0 || i > size || j > size {
                            return Err(Error::InvalidInput(
                                "table unit index out of range (1-based)".into(),
                            ));
                        }
                        GenKey::GcUnit(n, i - 1, j - 1)
                    }
                };
                let rows = t.matrix.len();
                let cols = t.matrix.first().map_or(0, |r| r.len());
                if t.matrix.iter().any(|r| r.len() != cols) {
                    return Err(Error::InvalidInput("ragged table matrix".into()));
                }
                let mut pm = PolyMatrix::zeros(rows, cols);
                for (ri, row) in t.matrix.iter().enumerate() {
                    for (ci, p) in row.iter().enumerate() {
                        pm[(ri, ci)] = p.clone();
                    }
                }
                map.insert(key, pm);
            }
            ConformalModule::explicit(algebra, *rank, *n_max, map)
        }
    }
}

fn recipe_spec(m: &ConformalModule) -> RecipeSpec {
    match &m.recipe {
        Recipe::VirModule { delta, alpha } => RecipeSpec::VirModule {
            delta: delta.clone(),
            alpha: alpha.clone(),
        },
        Recipe::HvModule { delta, alpha, beta } => RecipeSpec::HvModule {
            delta: delta.clone(),
            alpha: alpha.clone(),
            beta: beta.clone(),
        },
        Recipe::GcStandard { alpha } => RecipeSpec::GcStandard {
            alpha: alpha.clone(),
        },
        Recipe::GcDual { alpha } => RecipeSpec::GcDual {
            alpha: alpha.clone(),
        },
        Recipe::DirectSum(parts) => RecipeSpec::DirectSum {
            parts: parts.iter().map(recipe_spec).collect(),
        },
        Recipe::BasisChange { inner, change, .. } => RecipeSpec::BasisChange {
            inner: Box::new(recipe_spec(inner)),
            matrix: change.to_scalar_grid().expect("constant by construction"),
        },
        Recipe::Explicit { n_max, tables } => {
            let entries = tables
                .iter()
                .map(|(key, pm)| {
                    let (n, i, j) = match key {
                        GenKey::VirL => (None, None, None),
                        GenKey::Hv(n) => (Some(*n), None, None),
                        GenKey::GcUnit(n, i, j) => (Some(*n), Some(i + 1), Some(j + 1)),
                    };
                    let matrix = (0..pm.rows())
                        .map(|r| (0..pm.cols()).map(|c| pm[(r, c)].clone()).collect())
                        .collect();
                    TableEntrySpec { n, i, j, matrix }
                })
                .collect();
            RecipeSpec::Explicit {
                rank: m.rank,
                n_max: *n_max,
                tables: entries,
            }
        }
    }
}
