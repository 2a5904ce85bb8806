//! Polynomial ansatz search for solutions of the toric nearly Kähler equation.
//!
//! The ansatz fixes `phi^0 = 3`, `phi^1 = 0`, `phi^2 = |mu|^2` and leaves the
//! homogeneous parts `phi^3 .. phi^d` unknown. Each monomial coefficient of the
//! residual is a polynomial of degree at most 3 in the unknowns.

mod coeff_poly;
mod cubic;
mod lemmas;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{sum_of_squares, Coeff, Monomial, Poly3, Scalar};
use crate::potential::star_residual;
use crate::sampling;

pub use coeff_poly::CoeffPoly;
pub use cubic::{canonicalize_cubic, canonicalize_cubic_poly, CanonicalCubic, NotFactorable};
pub use lemmas::{
    hesse_cone_test, kernel_substitution_residual, lemma_identity_checks, quadratic_identity_defect, random_cone,
    yz_det, HesseCone, LemmaReport, NotHomogeneous,
};

pub const MIN_DEGREE: u32 = 3;
pub const MAX_DEGREE: u32 = 5;
/// Newton stops once `||F||_inf` is below this.
pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITER: usize = 200;
/// Homogeneous parts with max coefficient below this count as vanishing.
pub const PART_ZERO_TOL: f64 = 1e-8;
/// Tolerance on `lambda^2 = 1/3` for the cubic classification.
pub const LAMBDA_SQ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ansatz degree {0} is unsupported; expected 3, 4 or 5")]
pub struct UnsupportedDegree(pub u32);

/// The normalized ansatz of degree `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ansatz {
    degree: u32,
    /// Unknown monomials, graded-lex within each degree `3..=d`.
    monomials: Vec<Monomial>,
}

impl Ansatz {
    pub fn new(degree: u32) -> Result<Self, UnsupportedDegree> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&degree) {
            return Err(UnsupportedDegree(degree));
        }
        let monomials = (MIN_DEGREE..=degree).flat_map(Monomial::of_degree).collect();
        Ok(Ansatz { degree, monomials })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn unknowns(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Index range of the degree-`k` unknowns.
    pub fn part_range(&self, k: u32) -> std::ops::Range<usize> {
        let start: usize = (MIN_DEGREE..k).map(|j| Monomial::of_degree(j).len()).sum();
        start..start + Monomial::of_degree(k).len()
    }

    /// `3 + |mu|^2 + sum_i c_i m_i`.
    pub fn assemble<C: Coeff>(&self, coeffs: &[C]) -> Poly3<C> {
        assert_eq!(coeffs.len(), self.unknowns(), "coefficient count");
        let mut p = sum_of_squares::<C>();
        p.add_term(Monomial::ONE, C::from_int(3));
        for (m, c) in self.monomials.iter().zip(coeffs) {
            p.add_term(*m, c.clone());
        }
        p
    }

    /// The coefficient vector of a polynomial with this ansatz's fixed parts.
    pub fn coefficients_of(&self, p: &Poly3<f64>) -> Vec<f64> {
        self.monomials.iter().map(|m| p.coeff(m)).collect()
    }
}

/// One compiled term `coef * prod x[vars]`.
#[derive(Debug, Clone, PartialEq)]
struct Term {
    coef: f64,
    vars: Vec<usize>,
}

/// Residual equations with exact coefficients and a floating-point evaluator.
#[derive(Debug, Clone)]
pub struct CoeffSystem {
    ansatz: Ansatz,
    /// `(residual monomial, exact equation)`, only nonzero equations.
    equations: Vec<(Monomial, CoeffPoly)>,
    compiled: Vec<Vec<Term>>,
}

pub fn build_system(degree: u32) -> Result<CoeffSystem, UnsupportedDegree> {
    let ansatz = Ansatz::new(degree)?;
    let unknowns: Vec<CoeffPoly> = (0..ansatz.unknowns() as u32).map(CoeffPoly::var).collect();
    let residual = star_residual(&ansatz.assemble(&unknowns));
    let equations: Vec<(Monomial, CoeffPoly)> = residual.terms().map(|(m, c)| (*m, c.clone())).collect();
    let compiled = equations
        .iter()
        .map(|(_, eq)| {
            eq.terms()
                .map(|(k, q)| Term {
                    coef: num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN),
                    vars: k.iter().map(|&i| i as usize).collect(),
                })
                .collect()
        })
        .collect();
    Ok(CoeffSystem { ansatz, equations, compiled })
}

impl CoeffSystem {
    pub fn ansatz(&self) -> &Ansatz {
        &self.ansatz
    }

    pub fn equations(&self) -> &[(Monomial, CoeffPoly)] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Number of equations per residual monomial degree.
    pub fn counts_by_degree(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for (m, _) in &self.equations {
            *out.entry(m.degree()).or_insert(0) += 1;
        }
        out
    }

    /// Equations coming from residual monomials of degree `k`.
    pub fn block(&self, k: u32) -> impl Iterator<Item = &(Monomial, CoeffPoly)> {
        self.equations.iter().filter(move |(m, _)| m.degree() == k)
    }

    pub fn eval_exact(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.equations.iter().map(|(_, e)| e.eval_exact(x)).collect()
    }

    pub fn eval(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(
            self.compiled.len(),
            self.compiled
                .iter()
                .map(|eq| eq.iter().map(|t| t.coef * t.vars.iter().map(|&i| x[i]).product::<f64>()).sum()),
        )
    }

    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.compiled.len(), self.ansatz.unknowns());
        for (r, eq) in self.compiled.iter().enumerate() {
            for t in eq {
                for (pos, &v) in t.vars.iter().enumerate() {
                    let others: f64 =
                        t.vars.iter().enumerate().filter(|&(q, _)| q != pos).map(|(_, &i)| x[i]).product();
                    j[(r, v)] += t.coef * others;
                }
            }
        }
        j
    }

    pub fn residual_norm(&self, x: &[f64]) -> f64 {
        self.eval(x).amax()
    }
}

/// Damped Gauss-Newton from one start. Steps are least-squares solutions
/// via SVD, so rank deficiency from the symmetry orbit of solutions is harmless.
pub fn newton_solve(sys: &CoeffSystem, start: &[f64]) -> (Vec<f64>, f64, bool) {
    let mut x = DVector::from_column_slice(start);
    let mut f = sys.eval(x.as_slice());
    let mut norm2 = f.norm_squared();
    let mut polish = 0;
    for _ in 0..NEWTON_MAX_ITER {
        if f.amax() < NEWTON_TOL {
            // a few extra full steps drive the residual to rounding level
            polish += 1;
            if polish > 3 {
                break;
            }
        }
        let jac = sys.jacobian(x.as_slice());
        let svd = jac.svd(true, true);
        let cutoff = 1e-12 * svd.singular_values.max();
        let Ok(step) = svd.solve(&(-&f), cutoff) else { break };
        let mut lambda = 1.0;
        let mut moved = false;
        while lambda > 1e-10 {
            let cand = &x + &step * lambda;
            let fc = sys.eval(cand.as_slice());
            let n2 = fc.norm_squared();
            if n2 < norm2 {
                x = cand;
                f = fc;
                norm2 = n2;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !moved || !norm2.is_finite() {
            break;
        }
    }
    let res = f.amax();
    (x.as_slice().to_vec(), res, res < NEWTON_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Classification {
    /// Highest nonvanishing part is cubic and factors as `lambda l1 l2 l3` with `lambda^2 = 1/3`.
    Phi0Equivalent,
    /// Cubic top part that is a product of real lines, but with the wrong `lambda`.
    CubicOtherLambda,
    CubicNotFactorable,
    /// All parts of degree >= 3 vanish.
    Quadratic,
    /// A nonvanishing part of degree 4 or more.
    HigherDegree {
        degree: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchHit {
    pub coeffs: Vec<f64>,
    pub residual_norm: f64,
    pub classified_as: Classification,
    /// `max |coeff|` of each homogeneous part, keyed by degree.
    pub part_norms: BTreeMap<u32, f64>,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub degree: u32,
    pub seed: u64,
    pub starts: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub converged: Vec<SearchHit>,
}

pub fn classify(ansatz: &Ansatz, coeffs: &[f64]) -> (Classification, BTreeMap<u32, f64>, Option<f64>) {
    let norms: BTreeMap<u32, f64> = (MIN_DEGREE..=ansatz.degree())
        .map(|k| (k, coeffs[ansatz.part_range(k)].iter().fold(0.0f64, |m, c| m.max(c.abs()))))
        .collect();
    let top = norms.iter().rev().find(|(_, &n)| n >= PART_ZERO_TOL).map(|(&k, _)| k);
    match top {
        None => (Classification::Quadratic, norms, None),
        Some(3) => match canonicalize_cubic(&coeffs[ansatz.part_range(3)]) {
            Ok(c) if (c.lambda * c.lambda - 1.0 / 3.0).abs() < LAMBDA_SQ_TOL => {
                (Classification::Phi0Equivalent, norms, Some(c.lambda))
            }
            Ok(c) => (Classification::CubicOtherLambda, norms, Some(c.lambda)),
            Err(_) => (Classification::CubicNotFactorable, norms, None),
        },
        Some(k) => (Classification::HigherDegree { degree: k }, norms, None),
    }
}

/// Newton runs from `starts` uniform random points in `[-2, 2]^n`, in parallel.
/// Converged points are deduplicated (max-norm distance below 1e-6) in start order.
pub fn newton_search(sys: &CoeffSystem, starts: usize, seed: u64) -> SearchResult {
    let mut rng = sampling::rng(seed);
    let n = sys.ansatz().unknowns();
    let points: Vec<Vec<f64>> = (0..starts).map(|_| (0..n).map(|_| rng.random_range(-2.0..=2.0)).collect()).collect();
    let runs: Vec<(Vec<f64>, f64, bool)> = points.par_iter().map(|s| newton_solve(sys, s)).collect();
    let mut hits: Vec<SearchHit> = Vec::new();
    for (x, res, ok) in runs {
        if !ok {
            continue;
        }
        let dup = hits.iter().any(|h| h.coeffs.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-6));
        if dup {
            continue;
        }
        let (classified_as, part_norms, lambda) = classify(sys.ansatz(), &x);
        hits.push(SearchHit { coeffs: x, residual_norm: res, classified_as, part_norms, lambda });
    }
    SearchResult { degree: sys.ansatz().degree(), seed, starts, unknowns: n, equations: sys.len(), converged: hits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{phi0, Mat3};

    fn idx(a: &Ansatz, m: [u32; 3]) -> usize {
        a.monomials().iter().position(|x| *x == Monomial(m)).unwrap()
    }

    #[test]
    fn unknown_counts() {
        for (d, n) in [(3, 10), (4, 25), (5, 46)] {
            assert_eq!(Ansatz::new(d).unwrap().unknowns(), n);
        }
        assert_eq!(Ansatz::new(2), Err(UnsupportedDegree(2)));
        assert!(build_system(6).is_err());
    }

    #[test]
    fn assembled_fixed_parts() {
        let a = Ansatz::new(4).unwrap();
        let p = a.assemble(&vec![Scalar::default(); a.unknowns()]);
        assert_eq!(p, crate::algebra::parse_poly("3 + mu1^2 + mu2^2 + mu3^2").unwrap());
    }

    #[test]
    fn cubic_system_vanishes_at_phi0() {
        let sys = build_system(3).unwrap();
        let a = sys.ansatz();
        let mut x = vec![Scalar::default(); a.unknowns()];
        x[idx(a, [1, 1, 1])] = Scalar::from_parts(0, 1, 1, 3);
        assert_eq!(a.assemble(&x), phi0());
        assert!(sys.eval_exact(&x).iter().all(num_traits::Zero::is_zero));
        // all residual monomials of degree <= 3 except the constant one
        let counts = sys.counts_by_degree();
        assert_eq!(counts.get(&0), None);
        assert_eq!(sys.len(), counts.values().sum::<usize>());
        assert!(counts.keys().all(|&k| k <= 3));
    }

    #[test]
    fn cubic_lambda_equation() {
        let sys = build_system(3).unwrap();
        let a = sys.ansatz();
        let j = idx(a, [1, 1, 1]);
        let pos = sys.equations().iter().position(|(m, _)| *m == Monomial([1, 1, 1])).unwrap();
        for l in [-2i64, -1, 1, 3] {
            let mut x = vec![Scalar::default(); a.unknowns()];
            x[j] = Scalar::int(l);
            let lam = Scalar::int(l);
            let expect = &(&Scalar::int(2) * &lam.pow(3)) - &(&Scalar::ratio(2, 3) * &lam);
            let got = &sys.eval_exact(&x)[pos];
            assert!(got == &expect || got == &-&expect, "{got} vs {expect}");
        }
    }

    #[test]
    fn degree_one_block_is_harmonicity() {
        let sys = build_system(3).unwrap();
        let a = sys.ansatz();
        let harmonic = crate::algebra::parse_poly("mu1^3 - 3*mu1*mu2^2 + mu2*mu3^2 - 1/3*mu2^3").unwrap();
        let lap = (0..3).fold(Poly3::<Scalar>::zero(), |acc, i| acc.add(&harmonic.partial(i).partial(i)));
        assert!(lap.is_zero());
        let x: Vec<Scalar> = a.monomials().iter().map(|m| harmonic.coeff(m)).collect();
        assert!(sys.block(1).all(|(_, e)| num_traits::Zero::is_zero(&e.eval_exact(&x))));
        let mut y = vec![Scalar::default(); a.unknowns()];
        y[idx(a, [3, 0, 0])] = Scalar::int(1);
        assert!(sys.block(1).any(|(_, e)| !num_traits::Zero::is_zero(&e.eval_exact(&y))));
    }

    #[test]
    fn quartic_top_block_is_hessian_determinant() {
        let sys = build_system(4).unwrap();
        let a = sys.ansatz();
        let mut rng = sampling::rng(5);
        let x: Vec<f64> = (0..a.unknowns()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let quartic = Poly3::from_terms(a.part_range(4).map(|i| (a.monomials()[i], x[i])));
        let det = Mat3::hessian(&quartic).det();
        let f = sys.eval(&x);
        let mut seen = 0;
        for (r, (m, _)) in sys.equations().iter().enumerate() {
            if m.degree() == 6 {
                assert!((f[r] - det.coeff(m)).abs() < 1e-10 * (1.0 + det.coeff(m).abs()));
                seen += 1;
            }
        }
        assert_eq!(seen, det.len());
        assert!(sys.len() > a.unknowns());
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let sys = build_system(3).unwrap();
        let mut rng = sampling::rng(9);
        let x: Vec<f64> = (0..10).map(|_| rng.random_range(-1.0..1.0)).collect();
        let j = sys.jacobian(&x);
        for k in 0..10 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += 1e-6;
            xm[k] -= 1e-6;
            let fd = (sys.eval(&xp) - sys.eval(&xm)) / 2e-6;
            assert!((fd - j.column(k)).amax() < 1e-6);
        }
    }

    #[test]
    fn cubic_search_finds_phi0_class() {
        let sys = build_system(3).unwrap();
        let res = newton_search(&sys, 20, 1);
        assert!(!res.converged.is_empty());
        for h in &res.converged {
            assert_eq!(h.classified_as, Classification::Phi0Equivalent, "{h:?}");
        }
    }
}
