//! The canonical Poisson bracket on `T*M` and Hamiltonian flows of fiber-degree ≥ 2
//! functions.
//!
//! Convention: `{P, Q} = Σ_k (∂P/∂ζ_k ∂Q/∂z^k − ∂P/∂z^k ∂Q/∂ζ_k)` plus the same sum
//! over the conjugate pairs `(ζ̄_l, z̄^l)`, so that `{ζ_k, z^k} = 1`.

use super::fiber::{FiberPoly, FiberVar};
use super::multi::{inv_int_scalar, ord_add, Var, EXACT};
use super::scalar::Coeff;
use crate::error::{Error, Result};

/// `{P, Q}` on the cotangent bundle.
///
/// The result is exact through fiber degree
/// `min(N_P + mindeg Q, N_Q + mindeg P) − 1` and loses one jet order.
pub fn poisson_bracket<C: Coeff>(p: &FiberPoly<C>, q: &FiberPoly<C>) -> Result<FiberPoly<C>> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(bracket(p, q))
}

pub(crate) fn bracket<C: Coeff>(p: &FiberPoly<C>, q: &FiberPoly<C>) -> FiberPoly<C> {
    let n = p.dim();
    let mut acc: Option<FiberPoly<C>> = None;
    let mut push = |t: FiberPoly<C>| {
        acc = Some(match acc.take() {
            Some(a) => &a + &t,
            None => t,
        });
    };
    for i in 0..n {
        for (fv, bv) in [(FiberVar::Zeta(i), Var::Z(i)), (FiberVar::ZetaBar(i), Var::Zbar(i))] {
            let dpf = p.diff_fiber(fv);
            let dqb = q.diff_base(bv);
            let dpb = p.diff_base(bv);
            let dqf = q.diff_fiber(fv);
            push(&(&dpf * &dqb) - &(&dpb * &dqf));
        }
    }
    acc.expect("dimension is positive")
}

/// `e^{H_K} Q = Σ_m H_K^m Q / m!` where `H_K Q = {K, Q}`.
///
/// Requires every term of `K` to have fiber degree at least 2, so that each
/// application raises the fiber degree and the series terminates.
pub fn ham_exp<C: Coeff>(k: &FiberPoly<C>, q: &FiberPoly<C>) -> Result<FiberPoly<C>> {
    check_hamiltonian(k)?;
    if k.dim() != q.dim() {
        return Err(Error::DimensionMismatch(k.dim(), q.dim()));
    }
    Ok(ham_exp_unchecked(k, q))
}

pub(crate) fn ham_exp_unchecked<C: Coeff>(k: &FiberPoly<C>, q: &FiberPoly<C>) -> FiberPoly<C> {
    series(k, q, 1)
}

/// `Σ_m H_K^m J / (m+1)!`, the generator of the first-order variation of `e^{H_K}`.
pub fn ham_phi1<C: Coeff>(k: &FiberPoly<C>, j: &FiberPoly<C>) -> Result<FiberPoly<C>> {
    check_hamiltonian(k)?;
    Ok(series(k, j, 2))
}

/// `Σ_{m>=0} H_K^m Q · (s−1)!/(m+s−1)!`.
///
/// `H_K` raises the fiber degree by at least one, so the `m`-th term lives in
/// degrees `>= mindeg Q + m`; the sum stops once that floor leaves the known range.
/// Terms past the floor are never added, so they cannot lower the jet order.
fn series<C: Coeff>(k: &FiberPoly<C>, q: &FiberPoly<C>, first: i64) -> FiberPoly<C> {
    let floor = q.min_degree();
    let mut sum = q.clone();
    let mut term = q.clone();
    let mut m = 1i64;
    loop {
        if ord_add(floor, m) > sum.fiber_order() {
            break;
        }
        term = bracket(k, &term).scale(&inv_int_scalar((m + first - 1).into()));
        if term.is_zero() && term.jet_order() == EXACT {
            break;
        }
        sum = &sum + &term;
        m += 1;
    }
    sum
}

pub(crate) fn check_hamiltonian<C: Coeff>(k: &FiberPoly<C>) -> Result<()> {
    if let Some((m, _)) = k.terms().find(|(m, _)| m.degree() < 2) {
        return Err(Error::FiberDegreeTooLow(format!(
            "Hamiltonian has a term of fiber degree {}",
            m.degree()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{JetSeries, Multi, Scalar, EXACT};

    type Fp = FiberPoly<Scalar>;

    fn mono(zeta: u16, zetabar: u16, z: u16, zb: u16, c: i64, n: i64) -> Fp {
        Fp::monomial(
            1,
            Multi::from_parts(&[zeta], &[zetabar]),
            JetSeries::monomial(1, Multi::from_parts(&[z], &[zb]), Scalar::from_int(c)),
            n,
        )
    }

    #[test]
    fn canonical_pair() {
        let zeta = mono(1, 0, 0, 0, 1, 4);
        let z = mono(0, 0, 1, 0, 1, 4);
        let b = poisson_bracket(&zeta, &z).unwrap();
        assert_eq!(b, mono(0, 0, 0, 0, 1, 4));
    }

    #[test]
    fn metric_times_zeta_zetabar() {
        // {g ζζ̄, z} = g ζ̄ for a jet g
        let g = JetSeries::from_terms(
            1,
            EXACT,
            [(Multi::from_parts(&[0], &[0]), Scalar::from_int(1)), (Multi::from_parts(&[1], &[1]), Scalar::from_int(-2))],
        );
        let k = Fp::monomial(1, Multi::from_parts(&[1], &[1]), g.clone(), 6);
        let z = mono(0, 0, 1, 0, 1, 6);
        let expect = Fp::monomial(1, Multi::from_parts(&[0], &[1]), g, 6);
        assert_eq!(poisson_bracket(&k, &z).unwrap(), expect);
    }

    #[test]
    fn direct_expansion() {
        // {ζ² z̄, ζ̄ z} = 2ζζ̄z̄ − ζ²z
        let p = mono(2, 0, 0, 1, 1, 6);
        let q = mono(0, 1, 1, 0, 1, 6);
        let expect = &mono(1, 1, 0, 1, 2, 6) - &mono(2, 0, 1, 0, 1, 6);
        assert_eq!(poisson_bracket(&p, &q).unwrap(), expect);
    }

    #[test]
    fn flat_flow_shifts_zbar() {
        let k = mono(1, 1, 0, 0, 1, 6);
        let q = mono(0, 0, 0, 2, 1, 6);
        let out = ham_exp(&k, &q).unwrap();
        // (z̄ + ζ)²
        let expect = &(&mono(0, 0, 0, 2, 1, 6) + &mono(1, 0, 0, 1, 2, 6)) + &mono(2, 0, 0, 0, 1, 6);
        assert_eq!(out, expect);
        let one = mono(0, 0, 0, 0, 1, 6);
        assert_eq!(ham_exp(&k, &one).unwrap(), one);
    }

    #[test]
    fn low_degree_hamiltonian_rejected() {
        let k = mono(1, 0, 0, 0, 1, 4);
        let q = mono(0, 0, 1, 0, 1, 4);
        assert!(matches!(ham_exp(&k, &q), Err(Error::FiberDegreeTooLow(_))));
    }
}
