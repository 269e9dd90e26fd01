//! The groups `G_c(m, n) = A_c(m, n) ⋊ <t>` with `t^-1 a t = psi(a)`.
//!
//! `A_c(m, n)` is `Z^c` modulo the image of the bidiagonal matrix with
//! `n - m` on the diagonal and `-m` below it; `psi` is induced by the unit
//! lower bidiagonal matrix. Elements are kept in the normal form `a * t^k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::abelian::{AbElement, AbHom, AbSubgroup, FinAbGroup};
use crate::error::{Error, Result};
use crate::intlinalg::IntMatrix;

/// Parameters of `BS(m, n)`, normalized to `0 < m <= |n|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BsParams {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    /// True when the input was swapped or negated to reach canonical form.
    pub canonicalized: bool,
}

impl BsParams {
    /// Accepts any pair of nonzero integers. `(m, n)` and `(n, m)` give
    /// isomorphic groups, as do `(m, n)` and `(-m, -n)`.
    pub fn new(m: i64, n: i64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParams("m and n must be nonzero".into()));
        }
        const LIMIT: i64 = 1 << 31;
        if m.abs() > LIMIT || n.abs() > LIMIT {
            return Err(Error::InvalidParams(format!("|m|, |n| must not exceed {LIMIT}")));
        }
        let (mut cm, mut cn) = (m, n);
        if cm.abs() > cn.abs() {
            std::mem::swap(&mut cm, &mut cn);
        }
        if cm < 0 {
            cm = -cm;
            cn = -cn;
        }
        Ok(Self { m: cm, n: cn, d: cm.gcd(&cn), canonicalized: (cm, cn) != (m, n) })
    }

    pub fn is_coprime(&self) -> bool {
        self.d == 1
    }

    /// `n - m`, signed.
    pub fn diff(&self) -> i64 {
        self.n - self.m
    }
}

/// The relation matrix of `A_c(m, n)`.
pub fn phi_matrix(m: i64, n: i64, c: usize) -> IntMatrix {
    let mut a = IntMatrix::zeros(c, c);
    for i in 0..c {
        a[(i, i)] = BigInt::from(n - m);
        if i + 1 < c {
            a[(i + 1, i)] = BigInt::from(-m);
        }
    }
    a
}

/// The matrix inducing `psi`: ones on the diagonal and subdiagonal.
pub fn psi_matrix(c: usize) -> IntMatrix {
    let mut a = IntMatrix::identity(c);
    for i in 0..c.saturating_sub(1) {
        a[(i + 1, i)] = BigInt::one();
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GcElement {
    pub a: AbElement,
    pub k: i64,
}

#[derive(Clone, Debug)]
pub struct GcGroup {
    params: BsParams,
    c: usize,
    torsion: FinAbGroup,
    psi: AbHom,
    psi_inverse: AbHom,
    s: AbElement,
    nu: Option<BigInt>,
}

impl GcGroup {
    pub fn build(params: BsParams, c: usize) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidParams("class bound c must be at least 1".into()));
        }
        if params.m == params.n {
            return Err(Error::DegenerateParams(params.m));
        }
        let (m, n) = (params.m, params.n);
        let torsion = FinAbGroup::from_relation_matrix(&phi_matrix(m, n, c))?;
        let psi = AbHom::induced(&torsion, &psi_matrix(c))?;
        let psi_inverse = psi.inverse()?;
        let s = torsion.ambient_generators()[0].clone();

        let nu = if params.is_coprime() {
            let modulus = torsion.order().clone();
            let nu = if modulus.is_one() {
                BigInt::zero()
            } else {
                let inv = mod_inverse(&BigInt::from(m), &modulus)
                    .ok_or_else(|| Error::Inconsistency("m is not invertible mod |n-m|^c".into()))?;
                (BigInt::from(n) * inv).mod_floor(&modulus)
            };
            Some(nu)
        } else {
            None
        };

        let g = Self { params, c, torsion, psi, psi_inverse, s, nu };
        let (lhs, rhs) = g.defining_relation_sides()?;
        if lhs != rhs {
            return Err(Error::Inconsistency("psi(m s) != n s".into()));
        }
        if let Some(nu) = &g.nu {
            if g.torsion.scale(nu, &g.s)? != g.psi.apply(&g.s)? {
                return Err(Error::Inconsistency("nu s != psi(s)".into()));
            }
        }
        Ok(g)
    }

    pub fn params(&self) -> &BsParams {
        &self.params
    }

    pub fn class_bound(&self) -> usize {
        self.c
    }

    pub fn torsion(&self) -> &FinAbGroup {
        &self.torsion
    }

    pub fn psi(&self) -> &AbHom {
        &self.psi
    }

    pub fn psi_inverse(&self) -> &AbHom {
        &self.psi_inverse
    }

    /// The image of the first ambient generator; generates `A_c` as a
    /// `<psi>`-module, and as a group when `gcd(m, n) = 1`.
    pub fn s(&self) -> &AbElement {
        &self.s
    }

    /// The exponent with `t^-1 s t = s^nu`, present when the torsion is cyclic
    /// and generated by `s`.
    pub fn nu(&self) -> Option<&BigInt> {
        self.nu.as_ref()
    }

    /// `(psi(m s), n s)`.
    pub fn defining_relation_sides(&self) -> Result<(AbElement, AbElement)> {
        let ms = self.torsion.scale(&BigInt::from(self.params.m), &self.s)?;
        let ns = self.torsion.scale(&BigInt::from(self.params.n), &self.s)?;
        Ok((self.psi.apply(&ms)?, ns))
    }

    /// `psi^k` for any integer `k`.
    pub fn psi_power(&self, k: i64) -> Result<AbHom> {
        if k >= 0 {
            self.psi.pow(k as u64)
        } else {
            self.psi_inverse.pow(k.unsigned_abs())
        }
    }

    pub fn identity(&self) -> GcElement {
        GcElement { a: self.torsion.zero(), k: 0 }
    }

    pub fn t(&self) -> GcElement {
        GcElement { a: self.torsion.zero(), k: 1 }
    }

    pub fn element(&self, a: AbElement, k: i64) -> Result<GcElement> {
        if !self.torsion.is_member(&a) {
            return Err(Error::ParentMismatch);
        }
        Ok(GcElement { a, k })
    }

    pub fn torsion_element(&self, a: AbElement) -> Result<GcElement> {
        self.element(a, 0)
    }

    /// `(a1, k1) * (a2, k2) = (a1 + psi^-k1(a2), k1 + k2)`.
    pub fn multiply(&self, x: &GcElement, y: &GcElement) -> Result<GcElement> {
        let moved = self.psi_power(x.k.checked_neg().ok_or(Error::ExponentOverflow)?)?.apply(&y.a)?;
        Ok(GcElement {
            a: self.torsion.add(&x.a, &moved)?,
            k: x.k.checked_add(y.k).ok_or(Error::ExponentOverflow)?,
        })
    }

    /// `(a, k)^-1 = (-psi^k(a), -k)`.
    pub fn inverse(&self, x: &GcElement) -> Result<GcElement> {
        let a = self.torsion.neg(&self.psi_power(x.k)?.apply(&x.a)?)?;
        Ok(GcElement { a, k: x.k.checked_neg().ok_or(Error::ExponentOverflow)? })
    }

    pub fn power(&self, x: &GcElement, e: i64) -> Result<GcElement> {
        let base = if e < 0 { self.inverse(x)? } else { x.clone() };
        let mut e = e.unsigned_abs();
        let mut result = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = self.multiply(&result, &sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = self.multiply(&sq, &sq)?;
            }
        }
        Ok(result)
    }

    /// `x^-1 y^-1 x y`.
    pub fn commutator(&self, x: &GcElement, y: &GcElement) -> Result<GcElement> {
        let xi = self.inverse(x)?;
        let yi = self.inverse(y)?;
        let p = self.multiply(&xi, &yi)?;
        let p = self.multiply(&p, x)?;
        self.multiply(&p, y)
    }

    /// `[gamma_2, gamma_3, ..., gamma_{c+1}]`, each term inside the torsion.
    /// `gamma_{k+1} = (psi - id)(gamma_k)`, starting from `gamma_2 = (psi - id)(A)`.
    pub fn lower_central_series(&self) -> Result<Vec<AbSubgroup>> {
        let delta = self.psi.sub(&AbHom::identity(&self.torsion))?;
        let mut series = Vec::with_capacity(self.c);
        let mut current = delta.image()?;
        series.push(current.clone());
        for _ in 1..self.c {
            current = current.map(&delta)?;
            series.push(current.clone());
        }
        Ok(series)
    }

    /// Checks the commutator-power, lower-central-term and torsion-generation
    /// statements for coprime parameters.
    pub fn verify_lower_central_structure(&self) -> Result<CheckReport> {
        if !self.params.is_coprime() {
            return Err(Error::PreconditionViolated(format!(
                "requires gcd(m, n) = 1, got {}",
                self.params.d
            )));
        }
        let a = &self.torsion;
        let series = self.lower_central_series()?;
        let gamma = |k: usize| -> &AbSubgroup { &series[k - 2] };
        let m_minus_n = BigInt::from(self.params.m - self.params.n);
        let mut report = CheckReport::default();

        let mut ok = true;
        for k in 1..=self.c {
            let x = a.scale(&num_traits::pow(m_minus_n.clone(), k), &self.s)?;
            ok &= gamma(k + 1).contains(&x)?;
        }
        report.push("commutator_powers", ok, "(m-n)^k s lies in gamma_{k+1} for 1 <= k <= c");

        let generated = AbSubgroup::generated(a, std::slice::from_ref(&self.s))?;
        report.push("torsion_generated_by_s", generated.order() == a.order(), "<s> is the whole torsion subgroup");

        let mut ok = true;
        for k in 2..=self.c + 1 {
            let x = a.scale(&num_traits::pow(m_minus_n.clone(), k - 1), &self.s)?;
            let expected = AbSubgroup::generated(a, &[x])?;
            ok &= gamma(k).same_as(&expected)?;
        }
        report.push("lower_central_terms", ok, "gamma_k = <(m-n)^(k-1) s> for 2 <= k <= c+1");

        report.push("nilpotency_class", gamma(self.c + 1).is_trivial(), "gamma_{c+1} is trivial");

        let (lhs, rhs) = self.defining_relation_sides()?;
        report.push("defining_relation", lhs == rhs, "psi(m s) = n s");

        if let Some(nu) = &self.nu {
            let modulus = a.order();
            let n_ok = (nu * self.params.m - self.params.n).mod_floor(modulus).is_zero()
                && nu.gcd(&BigInt::from(self.params.diff())).is_one()
                && a.scale(nu, &self.s)? == self.psi.apply(&self.s)?;
            report.push("nu_relation", n_ok, "nu m = n mod |n-m|^c, gcd(nu, n-m) = 1, psi(s) = nu s");
        }
        Ok(report)
    }

    /// Compares `(d A) ⋊ <t>` with `G_c(m/d, n/d)` for `d = gcd(m, n) > 1`.
    pub fn d_subgroup_reduction(&self) -> Result<ReductionReport> {
        let p = self.params;
        if p.d == 1 {
            return Err(Error::PreconditionViolated("requires gcd(m, n) > 1".into()));
        }
        let a = &self.torsion;
        let d = BigInt::from(p.d);
        let gens = a.basis().iter().map(|b| a.scale(&d, b)).collect::<Result<Vec<_>>>()?;
        let sub = AbSubgroup::generated(a, &gens)?;
        let reduced = GcGroup::build(BsParams::new(p.m / p.d, p.n / p.d)?, self.c)?;
        let reduced_nu = reduced.nu().cloned().ok_or_else(|| Error::Inconsistency("reduced group lacks nu".into()))?;
        let q = BigInt::from(p.diff() / p.d).abs();
        let expected_order = num_traits::pow(q, self.c);

        let mut report = CheckReport::default();
        let mut invariant = true;
        for g in sub.generators() {
            invariant &= sub.contains(&self.psi.apply(g)?)?;
        }
        report.push("psi_invariant", invariant, "psi maps d A into itself");
        report.push("cyclic", sub.is_cyclic()?, "d A is cyclic");
        report.push(
            "order_matches",
            sub.order() == &expected_order && reduced.torsion().order() == &expected_order,
            "|d A| = |A_c(m/d, n/d)| = |(n-m)/d|^c",
        );

        let ds = a.scale(&d, &self.s)?;
        let spans = AbSubgroup::generated(a, std::slice::from_ref(&ds))?.same_as(&sub)?;
        report.push("generator_spans", spans, "d s generates d A");
        // k s' -> k (d s) is injective iff both generators have the same order.
        let injective = a.element_order(&ds)? == reduced.torsion().element_order(reduced.s())?;
        report.push("correspondence_bijective", injective, "s' -> d s extends to an isomorphism");
        let acts = self.psi.apply(&ds)? == a.scale(&reduced_nu, &ds)?;
        report.push("action_matches", acts, "psi(d s) = nu' (d s)");

        Ok(ReductionReport {
            d: p.d,
            subgroup_order: sub.order().clone(),
            reduced_params: *reduced.params(),
            reduced_factors: reduced.torsion().invariant_factors().to_vec(),
            reduced_nu,
            generator: ds,
            reduced_generator: reduced.s().clone(),
            checks: report,
        })
    }
}

pub(crate) fn mod_inverse(a: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(modulus).extended_gcd(modulus);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(modulus))
    } else {
        None
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CheckReport {
    pub checks: Vec<NamedCheck>,
}

impl CheckReport {
    pub fn push(&mut self, name: &str, passed: bool, detail: &str) {
        self.checks.push(NamedCheck { name: name.into(), passed, detail: detail.into() });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub d: i64,
    pub subgroup_order: BigInt,
    pub reduced_params: BsParams,
    pub reduced_factors: Vec<BigInt>,
    pub reduced_nu: BigInt,
    /// `d s`, the image of the reduced group's `s'`.
    pub generator: AbElement,
    pub reduced_generator: AbElement,
    pub checks: CheckReport,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn gc(m: i64, n: i64, c: usize) -> GcGroup {
        GcGroup::build(BsParams::new(m, n).unwrap(), c).unwrap()
    }

    #[test]
    fn canonicalization() {
        let p = BsParams::new(1, 3).unwrap();
        assert_eq!((p.m, p.n, p.d, p.canonicalized), (1, 3, 1, false));
        let p = BsParams::new(-2, -6).unwrap();
        assert_eq!((p.m, p.n, p.canonicalized), (2, 6, true));
        let p = BsParams::new(3, -1).unwrap();
        assert_eq!((p.m, p.n), (1, -3));
        let p = BsParams::new(6, 4).unwrap();
        assert_eq!((p.m, p.n, p.d), (4, 6, 2));
        assert!(BsParams::new(0, 3).is_err());
        assert!(BsParams::new(2, 0).is_err());
    }

    #[test]
    fn matrices() {
        assert_eq!(phi_matrix(1, 3, 2), IntMatrix::from_rows(&[[2, 0], [-1, 2]]));
        assert_eq!(psi_matrix(2), IntMatrix::from_rows(&[[1, 0], [1, 1]]));
        assert_eq!(phi_matrix(4, 9, 1), IntMatrix::from_rows(&[[5]]));
        let (a, b) = (phi_matrix(2, 7, 4), psi_matrix(4));
        assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn build_examples() {
        let g = gc(1, 3, 2);
        assert_eq!(g.torsion().invariant_factors(), &[big(4)]);
        assert_eq!(g.nu(), Some(&big(3)));
        let g = gc(2, 5, 2);
        assert_eq!(g.torsion().invariant_factors(), &[big(9)]);
        assert_eq!(g.nu(), Some(&big(7)));
        for c in 1..6 {
            assert!(gc(1, 2, c).torsion().is_trivial());
        }
        assert!(matches!(GcGroup::build(BsParams::new(3, 3).unwrap(), 2), Err(Error::DegenerateParams(3))));
        assert!(GcGroup::build(BsParams::new(1, 3).unwrap(), 0).is_err());
    }

    #[test]
    fn conjugating_s_by_t() {
        let g = gc(1, 3, 2);
        let t = g.t();
        let ti = g.inverse(&t).unwrap();
        let s = g.torsion_element(g.s().clone()).unwrap();
        let r = g.multiply(&ti, &g.multiply(&s, &t).unwrap()).unwrap();
        assert_eq!(r.k, 0);
        assert_eq!(r.a, g.torsion().scale(&big(3), g.s()).unwrap());
        assert_eq!(r.a, g.psi().apply(g.s()).unwrap());
    }

    #[test]
    fn inverse_is_two_sided() {
        let g = gc(2, 7, 3);
        for a in g.torsion().elements().unwrap().step_by(7) {
            for k in [-3i64, 0, 2, 5] {
                let x = g.element(a.clone(), k).unwrap();
                let xi = g.inverse(&x).unwrap();
                assert_eq!(g.multiply(&x, &xi).unwrap(), g.identity());
                assert_eq!(g.multiply(&xi, &x).unwrap(), g.identity());
            }
        }
    }

    #[test]
    fn lower_central_examples() {
        let g = gc(1, 3, 2);
        let series = g.lower_central_series().unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series[0].order(), &big(2));
        assert!(series[0].contains(&g.torsion().scale(&big(2), g.s()).unwrap()).unwrap());
        assert!(series[1].is_trivial());

        for gamma in gc(1, 2, 4).lower_central_series().unwrap() {
            assert!(gamma.is_trivial());
        }

        let g = gc(2, 5, 3);
        let series = g.lower_central_series().unwrap();
        let orders: Vec<_> = series.iter().map(|s| s.order().clone()).collect();
        assert_eq!(orders, vec![big(9), big(3), big(1)]);
    }

    #[test]
    fn structure_checks_pass() {
        for (m, n, c) in [(1, 3, 3), (2, 5, 2), (3, 7, 1), (1, -4, 3)] {
            let report = gc(m, n, c).verify_lower_central_structure().unwrap();
            assert!(report.all_passed(), "{m} {n} {c}: {report:?}");
        }
        assert!(matches!(
            gc(2, 6, 2).verify_lower_central_structure(),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn reduction_examples() {
        let r = gc(2, 6, 2).d_subgroup_reduction().unwrap();
        assert!(r.checks.all_passed(), "{r:?}");
        assert_eq!(r.subgroup_order, big(4));
        assert_eq!((r.reduced_params.m, r.reduced_params.n), (1, 3));
        assert_eq!(r.reduced_nu, big(3));

        let r = gc(2, 4, 1).d_subgroup_reduction().unwrap();
        assert!(r.checks.all_passed());
        assert_eq!(r.subgroup_order, big(1));

        let r = gc(3, 9, 2).d_subgroup_reduction().unwrap();
        assert!(r.checks.all_passed());
        assert_eq!(r.subgroup_order, big(4));
        assert_eq!((r.reduced_params.m, r.reduced_params.n), (1, 3));

        assert!(matches!(gc(1, 3, 2).d_subgroup_reduction(), Err(Error::PreconditionViolated(_))));
    }
}
