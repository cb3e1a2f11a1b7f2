//! Regular actions: detection, conformal weights and shifts, the conformal
//! weight product, Virasoro-module semisimplicity, and the two-Virasoro
//! reduction to rank-one Heisenberg–Virasoro data.

use serde::Serialize;

use crate::error::Error;
use crate::gc::GcElement;
use crate::matrix::PolyMatrix;
use crate::module::{gc_element_action, AlgebraKind, ConformalModule, GenKey};
use crate::poly::{MPoly, Var};
use crate::scalar::Scalar;
use crate::virasoro;

/// Which Virasoro element to test against a module.
#[derive(Debug, Clone)]
pub enum VirasoroSpec {
    /// The generator `L` of the Virasoro algebra (Vir modules only).
    VirL,
    /// `L_{a,b} = (a∂+b)J^0 + J^1`, acting on Heisenberg–Virasoro or `gc_1`
    /// modules, or through the canonical embedding on `gc_N` modules.
    Canonical { a: Scalar, b: Scalar },
    /// An explicit `gc_N` element (verified to be Virasoro).
    Element(GcElement),
}

impl VirasoroSpec {
    pub fn label(&self) -> String {
        match self {
            VirasoroSpec::VirL => "L".into(),
            VirasoroSpec::Canonical { a, b } => format!("L({a},{b})"),
            VirasoroSpec::Element(g) => format!("{g}"),
        }
    }
}

/// Entry that stops an action from being regular.
#[derive(Debug, Clone, Serialize)]
pub struct OffendingEntry {
    pub row: usize,
    pub col: usize,
    pub entry: MPoly,
}

/// Outcome of a regularity check in the module's given basis.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub label: String,
    pub regular: bool,
    /// Per basis vector `(Δ, α)`, present when regular.
    pub weights: Vec<(Scalar, Scalar)>,
    pub offending: Option<OffendingEntry>,
}

/// Exact conformal weight product over a set of regular reports.
#[derive(Debug, Clone, Serialize)]
pub struct WeightProduct {
    #[serde(rename = "p")]
    pub value: Scalar,
    /// `(element label, basis index, Δ)` per factor.
    pub factors: Vec<(String, usize, Scalar)>,
}

/// Semisimplicity verdict for a Virasoro-algebra module.
#[derive(Debug, Clone, Serialize)]
pub struct VirSemisimpleReport {
    pub semisimple: bool,
    pub regular: bool,
    pub weight_product: Option<Scalar>,
    /// Rank-one summands `(Δ, α)` when semisimple.
    pub summands: Vec<(Scalar, Scalar)>,
}

/// Per-basis-vector output of the two-Virasoro reduction: the
/// Heisenberg–Virasoro rank-one data `(β, Δ, α)` with `J^0 λ v = βv` and
/// `J^1 λ v = (∂+Δλ+α)v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HvReduction {
    pub beta: Scalar,
    pub delta: Scalar,
    pub alpha: Scalar,
}

/// `Some((Δ, α))` when the polynomial is exactly `∂ + Δλ + α`.
fn regular_form(p: &MPoly) -> Option<(Scalar, Scalar)> {
    if p.degree_in(Var::Mu) > 0 {
        return None;
    }
    let delta = p.coefficient([0, 1, 0]);
    let alpha = p.coefficient([0, 0, 0]);
    let rebuilt = crate::module::regular_entry(&delta, &alpha);
    (p == &rebuilt).then_some((delta, alpha))
}

/// Computes the action matrix of the chosen Virasoro element on the module.
pub fn virasoro_action(
    m: &ConformalModule,
    spec: &VirasoroSpec,
) -> Result<PolyMatrix, Error> {
    match (m.algebra(), spec) {
        (AlgebraKind::Vir, VirasoroSpec::VirL) => m.act_key(&GenKey::VirL),
        (AlgebraKind::Hv, VirasoroSpec::Canonical { a, b }) => {
            // (a∂+b)J^0 + J^1 acts as (b − aλ)·F_{J0} + F_{J1}
            let f0 = m.act_key(&GenKey::Hv(0))?;
            let f1 = m.act_key(&GenKey::Hv(1))?;
            let coeff = MPoly::linear_in_del(a, b).substitute(Var::Del, &-MPoly::lambda());
            Ok(&f0.scale_poly(&coeff) + &f1)
        }
        (AlgebraKind::Gc(n), VirasoroSpec::Canonical { a, b }) => {
            let g = virasoro::make_canonical_virasoro(n, a, b);
            gc_element_action(m, &g)
        }
        (AlgebraKind::Gc(_), VirasoroSpec::Element(g)) => {
            if !virasoro::is_virasoro(g).is_virasoro {
                return Err(Error::NotVirasoro);
            }
            gc_element_action(m, g)
        }
        _ => Err(Error::DimensionMismatch(
            "Virasoro element incompatible with the module's algebra".into(),
        )),
    }
}

/// Regularity of one Virasoro element's action in the module's given basis:
/// the action matrix must be diagonal with every diagonal entry exactly
/// `∂ + Δλ + α`.
pub fn check_regular(
    m: &ConformalModule,
    spec: &VirasoroSpec,
) -> Result<RegularityReport, Error> {
    let action = virasoro_action(m, spec)?;
    let label = spec.label();
    let k = m.rank();
    for i in 0..k {
        for j in 0..k {
            if i != j && !action[(i, j)].is_zero() {
                return Ok(RegularityReport {
                    label,
                    regular: false,
                    weights: Vec::new(),
                    offending: Some(OffendingEntry {
                        row: i,
                        col: j,
                        entry: action[(i, j)].clone(),
                    }),
                });
            }
        }
    }
    let mut weights = Vec::with_capacity(k);
    for i in 0..k {
        match regular_form(&action[(i, i)]) {
            Some(w) => weights.push(w),
            None => {
                return Ok(RegularityReport {
                    label,
                    regular: false,
                    weights: Vec::new(),
                    offending: Some(OffendingEntry {
                        row: i,
                        col: i,
                        entry: action[(i, i)].clone(),
                    }),
                })
            }
        }
    }
    Ok(RegularityReport {
        label,
        regular: true,
        weights,
        offending: None,
    })
}

/// Exact product of all conformal weights over the supplied reports (the
/// caller fixes the finite set of Virasoro elements).
pub fn weight_product(reports: &[RegularityReport]) -> Result<WeightProduct, Error> {
    let mut value = Scalar::one();
    let mut factors = Vec::new();
    for r in reports {
        if !r.regular {
            return Err(Error::NotRegular(format!(
                "report for {} is not regular",
                r.label
            )));
        }
        for (i, (delta, _)) in r.weights.iter().enumerate() {
            value *= delta;
            factors.push((r.label.clone(), i, delta.clone()));
        }
    }
    Ok(WeightProduct { value, factors })
}

/// Semisimplicity of a module over the Virasoro algebra, in the given basis:
/// regular action of `L` with nonzero conformal weight product. When it
/// holds, the rank-one summands `M_{Δ_i, α_i}` are listed.
pub fn vir_semisimple(m: &ConformalModule) -> Result<VirSemisimpleReport, Error> {
    if m.algebra() != AlgebraKind::Vir {
        return Err(Error::InvalidInput("not a Virasoro-algebra module".into()));
    }
    let report = check_regular(m, &VirasoroSpec::VirL)?;
    if !report.regular {
        return Ok(VirSemisimpleReport {
            semisimple: false,
            regular: false,
            weight_product: None,
            summands: Vec::new(),
        });
    }
    let p = weight_product(std::slice::from_ref(&report))?;
    let semisimple = !p.value.is_zero();
    Ok(VirSemisimpleReport {
        semisimple,
        regular: true,
        weight_product: Some(p.value),
        summands: if semisimple {
            report.weights
        } else {
            Vec::new()
        },
    })
}

/// Two-Virasoro reduction: from the regular data of two *different* canonical
/// elements `L_{a₁,b₁}`, `L_{a₂,b₂}`, recover per basis vector the
/// Heisenberg–Virasoro data `(β, Δ, α)` of the `J^0`/`J^1` actions.
///
/// The difference of the two actions reads
/// `(−(a₁−a₂)λ + (b₁−b₂))·β = (Δ⁽¹⁾−Δ⁽²⁾)λ + (α⁽¹⁾−α⁽²⁾)`, which forces the
/// divisibility of one linear polynomial by another; a constant `β` exists
/// exactly when the coefficient cross-equations hold, and the data is rejected
/// otherwise.
pub fn hv_reduce(
    l1: (&Scalar, &Scalar),
    rep1: &RegularityReport,
    l2: (&Scalar, &Scalar),
    rep2: &RegularityReport,
) -> Result<Vec<HvReduction>, Error> {
    let (a1, b1) = l1;
    let (a2, b2) = l2;
    if a1 == a2 && b1 == b2 {
        return Err(Error::ConstraintViolated(
            "the two Virasoro elements must be different".into(),
        ));
    }
    if !rep1.regular || !rep2.regular {
        return Err(Error::NotRegular(
            "both actions must be regular for the reduction".into(),
        ));
    }
    if rep1.weights.len() != rep2.weights.len() {
        return Err(Error::DimensionMismatch(
            "regular reports over different ranks".into(),
        ));
    }
    let da = a1 - a2;
    let db = b1 - b2;
    let mut out = Vec::with_capacity(rep1.weights.len());
    for (i, ((d1, al1), (d2, al2))) in rep1.weights.iter().zip(&rep2.weights).enumerate() {
        let dd = d1 - d2;
        let dal = al1 - al2;
        // β must satisfy −(a1−a2)·β = Δ⁽¹⁾−Δ⁽²⁾ and (b1−b2)·β = α⁽¹⁾−α⁽²⁾.
        let beta = if !da.is_zero() {
            let beta = &(-&dd) / &da;
            if &db * &beta != dal {
                return Err(Error::InconsistentData(format!(
                    "basis vector {i}: constant terms do not match the forced β"
                )));
            }
            beta
        } else {
            if !dd.is_zero() {
                return Err(Error::InconsistentData(format!(
                    "basis vector {i}: equal a's but different conformal weights"
                )));
            }
            &dal / &db
        };
        // J^1 = L_{a1,b1} − (a1∂+b1)J^0
        let delta = d1 + &(a1 * &beta);
        let alpha = al1 - &(b1 * &beta);
        // consistency against the second element
        let delta2 = d2 + &(a2 * &beta);
        let alpha2 = al2 - &(b2 * &beta);
        if delta2 != delta || alpha2 != alpha {
            return Err(Error::InconsistentData(format!(
                "basis vector {i}: the two elements disagree on the J^1 data"
            )));
        }
        out.push(HvReduction { beta, delta, alpha });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::check_module_axioms;
    use crate::virasoro::make_canonical_virasoro;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    #[test]
    fn vir_module_is_regular() {
        let m = ConformalModule::vir_module(s(2), Scalar::ratio(1, 3));
        let r = check_regular(&m, &VirasoroSpec::VirL).unwrap();
        assert!(r.regular);
        assert_eq!(r.weights, vec![(s(2), Scalar::ratio(1, 3))]);
    }

    #[test]
    fn canonical_on_standard_module() {
        // Π(L_{a,b}) on gc_standard(α): every weight (1−a, α+b)
        let (a, b) = (Scalar::ratio(1, 2), s(3));
        let alpha = Scalar::ratio(-1, 4);
        let m = ConformalModule::gc_standard(3, alpha.clone());
        let r = check_regular(
            &m,
            &VirasoroSpec::Canonical {
                a: a.clone(),
                b: b.clone(),
            },
        )
        .unwrap();
        assert!(r.regular);
        for w in &r.weights {
            assert_eq!(w.0, Scalar::one() - &a);
            assert_eq!(w.1, &alpha + &b);
        }
    }

    #[test]
    fn scrambled_sum_is_not_regular_with_offender() {
        let m = ConformalModule::direct_sum(vec![
            ConformalModule::vir_module(s(1), s(0)),
            ConformalModule::vir_module(s(0), s(0)),
        ])
        .unwrap();
        let u = PolyMatrix::from_scalar_grid(&[vec![s(1), s(1)], vec![s(0), s(1)]]).unwrap();
        let scrambled = m.basis_change(u).unwrap();
        let r = check_regular(&scrambled, &VirasoroSpec::VirL).unwrap();
        assert!(!r.regular);
        let off = r.offending.unwrap();
        assert!(off.row != off.col);
        assert!(!off.entry.is_zero());
    }

    #[test]
    fn weight_products() {
        let single = check_regular(
            &ConformalModule::vir_module(s(2), s(1)),
            &VirasoroSpec::VirL,
        )
        .unwrap();
        let p = weight_product(std::slice::from_ref(&single)).unwrap();
        assert_eq!(p.value, s(2));

        let zero_factor = check_regular(
            &ConformalModule::direct_sum(vec![
                ConformalModule::vir_module(s(1), s(0)),
                ConformalModule::vir_module(s(0), s(5)),
            ])
            .unwrap(),
            &VirasoroSpec::VirL,
        )
        .unwrap();
        let p0 = weight_product(std::slice::from_ref(&zero_factor)).unwrap();
        assert!(p0.value.is_zero());
    }

    #[test]
    fn weight_product_on_standard_module_pair() {
        // Γ = {Π(L_{0,0}), Π(L_{a,0})} on gc_standard(0), N=2: p = (1−a)²·1²
        let a = Scalar::ratio(1, 3);
        let m = ConformalModule::gc_standard(2, s(0));
        let r1 = check_regular(
            &m,
            &VirasoroSpec::Canonical {
                a: s(0),
                b: s(0),
            },
        )
        .unwrap();
        let r2 = check_regular(
            &m,
            &VirasoroSpec::Canonical {
                a: a.clone(),
                b: s(0),
            },
        )
        .unwrap();
        let p = weight_product(&[r1, r2]).unwrap();
        let one_minus_a = Scalar::one() - &a;
        assert_eq!(p.value, &one_minus_a * &one_minus_a);
        assert_eq!(p.factors.len(), 4);
    }

    #[test]
    fn semisimplicity_examples() {
        let good = ConformalModule::direct_sum(vec![
            ConformalModule::vir_module(s(1), s(0)),
            ConformalModule::vir_module(s(2), s(1)),
        ])
        .unwrap();
        let r = vir_semisimple(&good).unwrap();
        assert!(r.semisimple);
        assert_eq!(r.summands, vec![(s(1), s(0)), (s(2), s(1))]);

        let zero_weight = ConformalModule::vir_module(s(0), s(0));
        let r0 = vir_semisimple(&zero_weight).unwrap();
        assert!(!r0.semisimple && r0.regular);

        // trivial module: L acts as zero, not of the regular shape
        let trivial = ConformalModule::explicit(
            AlgebraKind::Vir,
            1,
            0,
            std::collections::BTreeMap::new(),
        )
        .unwrap();
        let rt = vir_semisimple(&trivial).unwrap();
        assert!(!rt.regular && !rt.semisimple);
    }

    #[test]
    fn hv_reduce_standard_case() {
        // L1 = J^1 (a=0,b=0) with (Δ,α) = (1,α0); L2 = ∂J^0+J^1 (a=1,b=0)
        // with (0,α0): β = 1 and the J^1 data is (1, α0).
        let alpha0 = Scalar::ratio(2, 5);
        let rep = |delta: Scalar, label: &str| RegularityReport {
            label: label.into(),
            regular: true,
            weights: vec![(delta, alpha0.clone())],
            offending: None,
        };
        let r1 = rep(s(1), "L(0,0)");
        let r2 = rep(s(0), "L(1,0)");
        let red = hv_reduce((&s(0), &s(0)), &r1, (&s(1), &s(0)), &r2).unwrap();
        assert_eq!(
            red,
            vec![HvReduction {
                beta: s(1),
                delta: s(1),
                alpha: alpha0
            }]
        );
    }

    #[test]
    fn hv_reduce_equal_a_branch() {
        // a1 = a2, b1 ≠ b2: β from the constant term alone.
        let beta = Scalar::ratio(-1, 2);
        let delta = s(1);
        let alpha = s(0);
        let (a, b1, b2) = (s(2), s(0), s(3));
        // L_{a,b} action on hv data: Δ^(ℓ) = Δ − aβ, α^(ℓ) = α + b_ℓ β
        let mk = |b: &Scalar| RegularityReport {
            label: format!("L({a},{b})"),
            regular: true,
            weights: vec![(&delta - &(&a * &beta), &alpha + &(b * &beta))],
            offending: None,
        };
        let r1 = mk(&b1);
        let r2 = mk(&b2);
        let red = hv_reduce((&a, &b1), &r1, (&a, &b2), &r2).unwrap();
        assert_eq!(red, vec![HvReduction { beta, delta, alpha }]);
    }

    #[test]
    fn hv_reduce_rejects_inconsistent_data() {
        let r1 = RegularityReport {
            label: "L(0,0)".into(),
            regular: true,
            weights: vec![(s(1), s(0))],
            offending: None,
        };
        let r2 = RegularityReport {
            label: "L(1,1)".into(),
            regular: true,
            weights: vec![(s(0), s(5))],
            offending: None,
        };
        // β forced to 1 by the λ-coefficients, but constants need 0·? −5 ≠ β
        let err = hv_reduce((&s(0), &s(0)), &r1, (&s(1), &s(1)), &r2).unwrap_err();
        assert!(matches!(err, Error::InconsistentData(_)));
    }

    #[test]
    fn hv_reduce_round_trip_through_hv_module() {
        let data = HvReduction {
            beta: Scalar::ratio(3, 7),
            delta: s(2),
            alpha: Scalar::ratio(-1, 3),
        };
        let m = ConformalModule::hv_module(
            data.delta.clone(),
            data.alpha.clone(),
            data.beta.clone(),
        );
        assert!(check_module_axioms(&m, 1).unwrap().is_empty());
        let l1 = (s(0), s(0));
        let l2 = (s(1), Scalar::ratio(1, 2));
        let r1 = check_regular(
            &m,
            &VirasoroSpec::Canonical {
                a: l1.0.clone(),
                b: l1.1.clone(),
            },
        )
        .unwrap();
        let r2 = check_regular(
            &m,
            &VirasoroSpec::Canonical {
                a: l2.0.clone(),
                b: l2.1.clone(),
            },
        )
        .unwrap();
        assert!(r1.regular && r2.regular);
        let red = hv_reduce((&l1.0, &l1.1), &r1, (&l2.0, &l2.1), &r2).unwrap();
        assert_eq!(red, vec![data]);
    }

    #[test]
    fn regularity_survives_round_trip_basis_change() {
        let m = ConformalModule::direct_sum(vec![
            ConformalModule::gc_standard(1, s(1)),
            ConformalModule::gc_dual(1, s(2)),
        ])
        .unwrap();
        let g = make_canonical_virasoro(1, &s(0), &s(0));
        let before = check_regular(&m, &VirasoroSpec::Element(g.clone())).unwrap();
        let u = PolyMatrix::from_scalar_grid(&[vec![s(2), s(0)], vec![s(0), s(5)]]).unwrap();
        let round =
            m.clone().basis_change(u.clone()).unwrap().basis_change(u.inverse().unwrap()).unwrap();
        let after = check_regular(&round, &VirasoroSpec::Element(g)).unwrap();
        assert!(before.regular && after.regular);
        assert_eq!(before.weights, after.weights);
    }
}
