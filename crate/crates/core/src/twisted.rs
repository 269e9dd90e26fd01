//! Automorphisms of `G_c(m, n)`, twisted conjugacy and Reidemeister numbers.
//!
//! An automorphism is determined by its action `M` on the torsion subgroup,
//! a translation `beta` and a sign: `t -> beta * t^eps`. It is a
//! homomorphism iff `M ∘ psi = psi^eps ∘ M`.
//!
//! Reidemeister numbers are computed twice: by a cokernel formula
//! ([`reidemeister_number`]) and by explicitly partitioning group elements
//! into twisted classes ([`reidemeister_oracle`]).

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::abelian::{self, AbElement, AbHom, FinAbGroup};
use crate::error::{Error, Result};
use crate::gcgroup::{BsParams, GcElement, GcGroup};

pub const DEFAULT_ORACLE_CAP: u64 = 4096;
pub const ORACLE_CAP_ENV: &str = "BSRINF_ORACLE_CAP";

/// The oracle cap from `BSRINF_ORACLE_CAP`, or [`DEFAULT_ORACLE_CAP`].
pub fn oracle_cap_from_env() -> u64 {
    std::env::var(ORACLE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_CAP)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::InvalidParams(format!("epsilon must be +1 or -1, got {v}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ReidemeisterNumber {
    Finite(BigInt),
    Infinite,
}

impl ReidemeisterNumber {
    pub fn is_finite(&self) -> bool {
        matches!(self, ReidemeisterNumber::Finite(_))
    }
}

impl fmt::Display for ReidemeisterNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReidemeisterNumber::Finite(n) => write!(f, "{n}"),
            ReidemeisterNumber::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GcAutomorphism {
    group: Arc<GcGroup>,
    action: AbHom,
    beta: AbElement,
    epsilon: Sign,
}

impl GcAutomorphism {
    /// Validates bijectivity of the action, then the intertwining condition.
    pub fn new(group: Arc<GcGroup>, action: AbHom, beta: AbElement, epsilon: Sign) -> Result<Self> {
        let a = group.torsion();
        if action.source() != a || action.target() != a {
            return Err(Error::ParentMismatch);
        }
        if !a.is_member(&beta) {
            return Err(Error::ParentMismatch);
        }
        if !action.is_automorphism()? {
            return Err(Error::NotBijective);
        }
        let twisted_psi = match epsilon {
            Sign::Plus => group.psi(),
            Sign::Minus => group.psi_inverse(),
        };
        if action.compose(group.psi())? != twisted_psi.compose(&action)? {
            return Err(Error::NotHomomorphism);
        }
        Ok(Self { group, action, beta, epsilon })
    }

    /// Action by multiplication with `mu`, translation `beta_multiple * s`.
    pub fn from_scalar(group: Arc<GcGroup>, mu: &BigInt, beta_multiple: &BigInt, epsilon: Sign) -> Result<Self> {
        let a = group.torsion();
        let action = AbHom::scalar(a, mu);
        let beta = a.scale(beta_multiple, group.s())?;
        Self::new(group, action, beta, epsilon)
    }

    pub fn group(&self) -> &Arc<GcGroup> {
        &self.group
    }

    pub fn action(&self) -> &AbHom {
        &self.action
    }

    pub fn beta(&self) -> &AbElement {
        &self.beta
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    /// Same action and sign, different translation.
    pub fn with_beta(&self, beta: AbElement) -> Result<Self> {
        Self::new(self.group.clone(), self.action.clone(), beta, self.epsilon)
    }

    /// The image of `t`.
    pub fn image_of_t(&self) -> GcElement {
        GcElement { a: self.beta.clone(), k: self.epsilon.value() }
    }

    /// `phi((a, k)) = (M a, 0) * (beta, eps)^k`.
    pub fn apply(&self, x: &GcElement) -> Result<GcElement> {
        let g = &self.group;
        let head = g.torsion_element(self.action.apply(&x.a)?)?;
        let tail = g.power(&self.image_of_t(), x.k)?;
        g.multiply(&head, &tail)
    }

    /// `z * x * phi(z)^-1`.
    pub fn twist(&self, z: &GcElement, x: &GcElement) -> Result<GcElement> {
        let g = &self.group;
        let zx = g.multiply(z, x)?;
        g.multiply(&zx, &g.inverse(&self.apply(z)?)?)
    }
}

fn ensure_within(group: &FinAbGroup, cap: u64, what: &'static str) -> Result<u64> {
    match group.order_u64() {
        Some(n) if n <= cap => Ok(n),
        _ => Err(Error::BoundExceeded { what, count: group.order().clone(), cap }),
    }
}

/// Decides whether `x = z y phi(z)^-1` for some `z`.
///
/// Twisting by `z = (b, j)` moves the t-exponent by `(1 - eps) j`. For
/// `eps = -1` that forces `j`, leaving a search over `b`; for `eps = +1`
/// levels are fixed and the orbit of `y` inside its level is closed under
/// the generators of the group.
pub fn are_twisted_conjugate(phi: &GcAutomorphism, x: &GcElement, y: &GcElement, cap: u64) -> Result<bool> {
    let g = phi.group();
    let a = g.torsion();
    if !a.is_member(&x.a) || !a.is_member(&y.a) {
        return Err(Error::ParentMismatch);
    }
    if x == y {
        return Ok(true);
    }
    match phi.epsilon() {
        Sign::Plus => {
            if x.k != y.k {
                return Ok(false);
            }
            ensure_within(a, cap, "torsion order for twisted-conjugacy search")?;
            let mut movers: Vec<GcElement> = a.basis().into_iter().map(|b| GcElement { a: b, k: 0 }).collect();
            movers.push(g.t());
            let mut seen = HashSet::from([y.a.clone()]);
            let mut stack = vec![y.clone()];
            while let Some(cur) = stack.pop() {
                for z in &movers {
                    let next = phi.twist(z, &cur)?;
                    debug_assert_eq!(next.k, y.k);
                    if next == *x {
                        return Ok(true);
                    }
                    if seen.insert(next.a.clone()) {
                        stack.push(next);
                    }
                }
            }
            Ok(false)
        }
        Sign::Minus => {
            let shift = x.k.checked_sub(y.k).ok_or(Error::ExponentOverflow)?;
            if shift % 2 != 0 {
                return Ok(false);
            }
            let n = ensure_within(a, cap, "torsion order for twisted-conjugacy search")?;
            let j = shift / 2;
            for idx in 0..n {
                let b = a.element_at(idx).expect("index below order");
                let z = g.multiply(&g.torsion_element(b)?, &g.power(&g.t(), j)?)?;
                if phi.twist(&z, y)? == *x {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Reidemeister number from cokernels: infinite for `eps = +1`, otherwise
/// `|coker(id - M)| + |coker(id - psi^-1 M)|`, counting classes of even and
/// odd t-exponent.
pub fn reidemeister_number(phi: &GcAutomorphism) -> Result<ReidemeisterNumber> {
    if phi.epsilon() == Sign::Plus {
        return Ok(ReidemeisterNumber::Infinite);
    }
    let g = phi.group();
    let id = AbHom::identity(g.torsion());
    let even = id.sub(phi.action())?.cokernel_order()?;
    let odd = id.sub(&g.psi_inverse().compose(phi.action())?)?.cokernel_order()?;
    Ok(ReidemeisterNumber::Finite(even + odd))
}

/// Table-driven copy of the group law for small torsion, used by the oracle.
struct DenseGroup {
    radices: Vec<u64>,
    n: usize,
    psi: Vec<u32>,
    psi_inv: Vec<u32>,
    action: Vec<u32>,
    neg: Vec<u32>,
}

impl DenseGroup {
    fn new(phi: &GcAutomorphism, n: u64) -> Result<Self> {
        let g = phi.group();
        let a = g.torsion();
        let radices = a.radices().map(<[u64]>::to_vec).unwrap_or_default();
        let table = |h: &AbHom| -> Result<Vec<u32>> {
            a.elements()?
                .map(|x| Ok(a.index_of(&h.apply(&x)?).expect("small group") as u32))
                .collect()
        };
        let neg = a
            .elements()?
            .map(|x| Ok(a.index_of(&a.neg(&x)?).expect("small group") as u32))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            radices,
            n: n as usize,
            psi: table(g.psi())?,
            psi_inv: table(g.psi_inverse())?,
            action: table(phi.action())?,
            neg,
        })
    }

    fn add(&self, x: u32, y: u32) -> u32 {
        abelian::add_indices(x as u64, y as u64, &self.radices) as u32
    }

    fn psi_power(&self, k: i64, mut x: u32) -> u32 {
        let table = if k >= 0 { &self.psi } else { &self.psi_inv };
        for _ in 0..k.unsigned_abs() {
            x = table[x as usize];
        }
        x
    }

    fn multiply(&self, (a1, k1): (u32, i64), (a2, k2): (u32, i64)) -> (u32, i64) {
        (self.add(a1, self.psi_power(-k1, a2)), k1 + k2)
    }

    fn inverse(&self, (a, k): (u32, i64)) -> (u32, i64) {
        (self.neg[self.psi_power(k, a) as usize], -k)
    }
}

/// Brute-force Reidemeister number: partitions the elements of t-exponent 0
/// and 1 into twisted classes by enumerating `z * y * phi(z)^-1` over torsion
/// `z`, without any cokernel computation.
///
/// For `eps = -1` every twisted class meets exactly one of these two levels,
/// in a single orbit of the torsion subgroup. For `eps = +1` the t-exponent
/// is invariant, which is checked on the group generators.
pub fn reidemeister_oracle(phi: &GcAutomorphism, cap: u64) -> Result<ReidemeisterNumber> {
    let g = phi.group();
    let a = g.torsion();
    let n = ensure_within(a, cap, "torsion order for the Reidemeister oracle")?;
    if phi.epsilon() == Sign::Plus {
        let mut movers: Vec<GcElement> = a.basis().into_iter().map(|b| GcElement { a: b, k: 0 }).collect();
        movers.push(g.t());
        for level in 0..3 {
            let y = GcElement { a: a.zero(), k: level };
            for z in &movers {
                if phi.twist(z, &y)?.k != level {
                    return Err(Error::Inconsistency("eps = +1 twisting changed the t-exponent".into()));
                }
            }
        }
        return Ok(ReidemeisterNumber::Infinite);
    }

    let dense = DenseGroup::new(phi, n)?;
    // beta does not enter z * y * phi(z)^-1 for torsion z, since phi(z) = (M b, 0).
    let mut classes = 0u64;
    for level in 0..2i64 {
        let mut seen = vec![false; dense.n];
        for start in 0..dense.n {
            if seen[start] {
                continue;
            }
            classes += 1;
            let y = (start as u32, level);
            for b in 0..dense.n as u32 {
                let z = (b, 0);
                let phi_z = (dense.action[b as usize], 0);
                let (img, k) = dense.multiply(dense.multiply(z, y), dense.inverse(phi_z));
                debug_assert_eq!(k, level);
                seen[img as usize] = true;
            }
        }
    }
    Ok(ReidemeisterNumber::Finite(BigInt::from(classes)))
}

/// The unique candidate action with `s -> w` satisfying
/// `M ∘ psi = psi^eps ∘ M`: since `e_{i+1} = (psi - 1) e_i`, the ambient
/// generators must go to `(psi^eps - 1)^(i-1) w`. Returns `None` when that
/// assignment does not respect the relations.
pub fn action_from_generator_image(g: &GcGroup, w: &AbElement, epsilon: Sign) -> Result<Option<AbHom>> {
    let a = g.torsion();
    let step = match epsilon {
        Sign::Plus => g.psi(),
        Sign::Minus => g.psi_inverse(),
    }
    .sub(&AbHom::identity(a))?;
    let mut images = Vec::with_capacity(a.ambient_rank());
    let mut cur = w.clone();
    for _ in 0..a.ambient_rank() {
        let next = step.apply(&cur)?;
        images.push(cur);
        cur = next;
    }
    match AbHom::from_ambient_images(a, a, &images) {
        Ok(h) => Ok(Some(h)),
        Err(Error::NotWellDefined) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Every valid action for the given sign, found by running `s -> w` over the
/// whole torsion subgroup. Because `s` generates the torsion as a
/// `<psi>`-module this is exhaustive.
pub fn valid_actions(g: &GcGroup, epsilon: Sign, cap: u64) -> Result<Vec<AbHom>> {
    let a = g.torsion();
    ensure_within(a, cap, "torsion order for action enumeration")?;
    let mut out = Vec::new();
    for w in a.elements()? {
        if let Some(h) = action_from_generator_image(g, &w, epsilon)? {
            if h.is_automorphism()? && h.compose(g.psi())? == twisted_psi(g, epsilon).compose(&h)? {
                out.push(h);
            }
        }
    }
    Ok(out)
}

fn twisted_psi(g: &GcGroup, epsilon: Sign) -> &AbHom {
    match epsilon {
        Sign::Plus => g.psi(),
        Sign::Minus => g.psi_inverse(),
    }
}

/// `n + m ≡ 0 (mod |n - m|^(c-1))`: for coprime parameters this holds exactly
/// when `G_c(m, n)` admits an automorphism inverting `t` modulo torsion.
pub fn anti_intertwiner_criterion(params: &BsParams, c: usize) -> bool {
    let modulus = num_traits::pow(BigInt::from(params.diff()).abs(), c.saturating_sub(1));
    if modulus.is_zero() {
        return params.n + params.m == 0;
    }
    BigInt::from(params.n + params.m).mod_floor(&modulus).is_zero()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RinfMethod {
    /// Modular criterion, coprime parameters only.
    Criterion,
    /// Search over images of `s`.
    GeneratorSearch,
    /// Search over all automorphisms of the torsion subgroup.
    Enumeration,
}

#[derive(Clone, Debug)]
pub struct RinfVerdict {
    pub has_rinf: bool,
    /// An automorphism with finite Reidemeister number, when one exists.
    pub witness: Option<GcAutomorphism>,
    pub method: RinfMethod,
    pub candidates_checked: u64,
}

/// Decides whether `G_c(m, n)` has the R-infinity property.
///
/// Coprime parameters use [`anti_intertwiner_criterion`], confirmed by an
/// explicit witness or by ruling out the `s -> s` candidate. Otherwise the
/// images of `s` are searched, starting with `s` itself; proving absence
/// needs the full torsion subgroup, bounded by `aut_cap`.
pub fn gc_has_rinf(g: &Arc<GcGroup>, aut_cap: u64) -> Result<RinfVerdict> {
    let params = *g.params();
    let a = g.torsion();
    if params.is_coprime() {
        let finite_exists = anti_intertwiner_criterion(&params, g.class_bound());
        if finite_exists {
            let witness = GcAutomorphism::from_scalar(g.clone(), &BigInt::one(), &BigInt::zero(), Sign::Minus)
                .map_err(|e| Error::Inconsistency(format!("criterion holds but mu = 1 is rejected: {e}")))?;
            return Ok(RinfVerdict { has_rinf: false, witness: Some(witness), method: RinfMethod::Criterion, candidates_checked: 1 });
        }
        if try_candidate(g, g.s())?.is_some() {
            return Err(Error::Inconsistency("criterion fails but s -> s gives a witness".into()));
        }
        return Ok(RinfVerdict { has_rinf: true, witness: None, method: RinfMethod::Criterion, candidates_checked: 1 });
    }

    if let Some(w) = try_candidate(g, g.s())? {
        return Ok(RinfVerdict { has_rinf: false, witness: Some(w), method: RinfMethod::GeneratorSearch, candidates_checked: 1 });
    }
    let n = ensure_within(a, aut_cap, "torsion order for the automorphism search")?;
    let skip = a.index_of(g.s());
    let mut checked = 1;
    for idx in 0..n {
        if Some(idx) == skip {
            continue;
        }
        checked += 1;
        let w = a.element_at(idx).expect("index below order");
        if let Some(phi) = try_candidate(g, &w)? {
            return Ok(RinfVerdict { has_rinf: false, witness: Some(phi), method: RinfMethod::GeneratorSearch, candidates_checked: checked });
        }
    }
    Ok(RinfVerdict { has_rinf: true, witness: None, method: RinfMethod::GeneratorSearch, candidates_checked: checked })
}

fn try_candidate(g: &Arc<GcGroup>, w: &AbElement) -> Result<Option<GcAutomorphism>> {
    let Some(action) = action_from_generator_image(g, w, Sign::Minus)? else {
        return Ok(None);
    };
    match GcAutomorphism::new(g.clone(), action, g.torsion().zero(), Sign::Minus) {
        Ok(phi) => Ok(Some(phi)),
        Err(Error::NotBijective | Error::NotHomomorphism) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Same decision by brute force over every automorphism of the torsion
/// subgroup; limited to small groups.
pub fn gc_has_rinf_by_enumeration(g: &Arc<GcGroup>, aut_cap: u64) -> Result<RinfVerdict> {
    let mut checked = 0u64;
    for action in abelian::enumerate_automorphisms(g.torsion(), aut_cap)? {
        checked += 1;
        match GcAutomorphism::new(g.clone(), action, g.torsion().zero(), Sign::Minus) {
            Ok(phi) => {
                return Ok(RinfVerdict { has_rinf: false, witness: Some(phi), method: RinfMethod::Enumeration, candidates_checked: checked })
            }
            Err(Error::NotHomomorphism) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(RinfVerdict { has_rinf: true, witness: None, method: RinfMethod::Enumeration, candidates_checked: checked })
}

/// Units modulo `n`, ascending.
pub fn units_mod(n: &BigInt) -> Result<Vec<BigInt>> {
    let limit = n.to_u64().filter(|&v| v <= 1 << 24).ok_or_else(|| Error::BoundExceeded {
        what: "modulus for unit enumeration",
        count: n.clone(),
        cap: 1 << 24,
    })?;
    if limit <= 1 {
        return Ok(vec![BigInt::zero()]);
    }
    Ok((1..limit).map(BigInt::from).filter(|u| u.gcd(n).is_one()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn gc(m: i64, n: i64, c: usize) -> Arc<GcGroup> {
        Arc::new(GcGroup::build(BsParams::new(m, n).unwrap(), c).unwrap())
    }

    fn scalar(g: &Arc<GcGroup>, mu: i64, beta: i64, eps: Sign) -> Result<GcAutomorphism> {
        GcAutomorphism::from_scalar(g.clone(), &big(mu), &big(beta), eps)
    }

    #[test]
    fn validity_examples() {
        let g = gc(1, 3, 2);
        assert!(scalar(&g, 1, 0, Sign::Minus).is_ok());
        assert!(matches!(scalar(&g, 2, 0, Sign::Minus), Err(Error::NotBijective)));
        let g = gc(2, 5, 3);
        // nu = 16 mod 27 and 16^2 = 13 mod 27, so no unit mu works.
        assert_eq!(g.nu(), Some(&big(16)));
        for mu in units_mod(&big(27)).unwrap() {
            assert!(matches!(
                GcAutomorphism::from_scalar(g.clone(), &mu, &big(0), Sign::Minus),
                Err(Error::NotHomomorphism)
            ));
        }
    }

    #[test]
    fn conjugacy_examples() {
        let g = gc(1, 3, 2);
        let a = g.torsion();
        let phi = scalar(&g, 1, 0, Sign::Minus).unwrap();
        let x0 = GcElement { a: a.zero(), k: 0 };
        let x2s = GcElement { a: a.scale(&big(2), g.s()).unwrap(), k: 0 };
        assert!(are_twisted_conjugate(&phi, &x0, &x0, 100).unwrap());
        assert!(!are_twisted_conjugate(&phi, &x0, &x2s, 100).unwrap());
        let lvl2 = GcElement { a: a.zero(), k: 2 };
        assert!(are_twisted_conjugate(&phi, &x0, &lvl2, 100).unwrap());
        assert!(!are_twisted_conjugate(&phi, &x0, &GcElement { a: a.zero(), k: 1 }, 100).unwrap());

        let id = scalar(&g, 1, 0, Sign::Plus).unwrap();
        assert!(!are_twisted_conjugate(&id, &x0, &lvl2, 100).unwrap());
    }

    #[test]
    fn reidemeister_examples() {
        let g = gc(1, 3, 2);
        let phi = scalar(&g, 1, 0, Sign::Minus).unwrap();
        assert_eq!(reidemeister_number(&phi).unwrap(), ReidemeisterNumber::Finite(big(6)));
        assert_eq!(reidemeister_oracle(&phi, 4096).unwrap(), ReidemeisterNumber::Finite(big(6)));

        let phi3 = scalar(&g, 3, 0, Sign::Minus).unwrap();
        assert_eq!(reidemeister_number(&phi3).unwrap(), reidemeister_oracle(&phi3, 4096).unwrap());

        let plus = scalar(&g, 3, 1, Sign::Plus).unwrap();
        assert_eq!(reidemeister_number(&plus).unwrap(), ReidemeisterNumber::Infinite);
        assert_eq!(reidemeister_oracle(&plus, 4096).unwrap(), ReidemeisterNumber::Infinite);

        let trivial = gc(1, 2, 3);
        let inv = scalar(&trivial, 1, 0, Sign::Minus).unwrap();
        assert_eq!(reidemeister_number(&inv).unwrap(), ReidemeisterNumber::Finite(big(2)));
        assert_eq!(reidemeister_oracle(&inv, 4096).unwrap(), ReidemeisterNumber::Finite(big(2)));
    }

    #[test]
    fn oracle_respects_cap() {
        let g = gc(1, 3, 4);
        let phi = scalar(&g, 1, 0, Sign::Plus).unwrap();
        assert!(matches!(reidemeister_oracle(&phi, 8), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn rinf_examples() {
        let v = gc_has_rinf(&gc(1, 3, 2), 1000).unwrap();
        assert!(!v.has_rinf);
        let w = v.witness.unwrap();
        assert!(reidemeister_number(&w).unwrap().is_finite());
        assert!(gc_has_rinf(&gc(1, 3, 4), 1000).unwrap().has_rinf);
        for (m, n) in [(1, 3), (2, 7), (1, -5), (2, 6), (3, 9)] {
            assert!(!gc_has_rinf(&gc(m, n, 1), 1000).unwrap().has_rinf);
        }
    }

    #[test]
    fn generator_search_matches_enumeration_on_small_groups() {
        for (m, n, c) in [(2, 6, 1), (2, 6, 2), (2, 4, 2), (2, 8, 2), (3, 9, 2), (2, -4, 2), (4, 6, 2), (2, 6, 3)] {
            let g = gc(m, n, c);
            let fast = gc_has_rinf(&g, 1 << 20).unwrap();
            let slow = gc_has_rinf_by_enumeration(&g, 1 << 20).unwrap();
            assert_eq!(fast.has_rinf, slow.has_rinf, "G_{c}({m},{n})");
        }
    }

    #[test]
    fn criterion_edge_cases() {
        let p = BsParams::new(1, 3).unwrap();
        assert!(anti_intertwiner_criterion(&p, 1));
        assert!(anti_intertwiner_criterion(&p, 3));
        assert!(!anti_intertwiner_criterion(&p, 4));
        assert!(anti_intertwiner_criterion(&BsParams::new(1, -1).unwrap(), 9));
    }

    #[test]
    fn sign_parsing() {
        assert_eq!(Sign::from_i64(-1).unwrap(), Sign::Minus);
        assert!(Sign::from_i64(0).is_err());
    }
}
