//! Finite abelian groups given as `Z^c / Im(R)` for a nonsingular relation
//! matrix `R`, stored in invariant-factor coordinates.
//!
//! Invariant factors equal to 1 are dropped, so a cyclic quotient always has
//! exactly one coordinate. The projection from the ambient lattice and the
//! lift back into it come from the left transform of the Smith normal form.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{self, IntMatrix};

/// Subgroup orders are computed by closure enumeration up to this parent
/// order and by lattice index above it.
pub const CLOSURE_BOUND: u64 = 1 << 20;

/// Default cap on the number of candidate matrices examined by
/// [`enumerate_automorphisms`].
pub const DEFAULT_AUT_CAP: u64 = 1_000_000;

struct GroupData {
    factors: Vec<BigInt>,
    order: BigInt,
    relations: IntMatrix,
    projection: IntMatrix,
    lift: IntMatrix,
    radices: Option<Vec<u64>>,
}

#[derive(Clone)]
pub struct FinAbGroup {
    inner: Arc<GroupData>,
}

impl PartialEq for FinAbGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.factors == other.inner.factors
    }
}

impl Eq for FinAbGroup {}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup{:?}", self.factors_display())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AbElement {
    coords: Vec<BigInt>,
}

impl AbElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for AbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FinAbGroup {
    /// The quotient `Z^c / Im(rel)` for a square nonsingular `rel`.
    pub fn from_relation_matrix(rel: &IntMatrix) -> Result<Self> {
        if !rel.is_square() {
            return Err(Error::NotSquare { rows: rel.rows(), cols: rel.cols() });
        }
        let s = intlinalg::snf(rel)?;
        if s.divisors.iter().any(Zero::is_zero) {
            return Err(Error::InfiniteQuotient);
        }
        let c = rel.rows();
        let kept: Vec<usize> = (0..c).filter(|&i| !s.divisors[i].is_one()).collect();
        let factors: Vec<BigInt> = kept.iter().map(|&i| s.divisors[i].clone()).collect();
        let mut projection = IntMatrix::zeros(kept.len(), c);
        let mut lift = IntMatrix::zeros(c, kept.len());
        for (row, &i) in kept.iter().enumerate() {
            for j in 0..c {
                projection[(row, j)] = s.u[(i, j)].clone();
                lift[(j, row)] = s.u_inv[(j, i)].clone();
            }
        }
        Ok(Self::assemble(factors, rel.clone(), projection, lift))
    }

    /// `Z_{f_1} + ... + Z_{f_k}`, normalized to invariant factors.
    pub fn from_factors(factors: &[BigInt]) -> Result<Self> {
        if factors.iter().any(|f| f <= &BigInt::zero()) {
            return Err(Error::InvalidParams("cyclic factors must be positive".into()));
        }
        if factors.is_empty() {
            return Ok(Self::trivial());
        }
        Self::from_relation_matrix(&IntMatrix::diagonal(factors))
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::from_factors(&[BigInt::from(n)])
    }

    pub fn trivial() -> Self {
        Self::assemble(Vec::new(), IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0))
    }

    fn assemble(factors: Vec<BigInt>, relations: IntMatrix, projection: IntMatrix, lift: IntMatrix) -> Self {
        let order = factors.iter().product::<BigInt>();
        let radices = if order <= BigInt::from(u64::MAX >> 1) {
            factors.iter().map(|f| f.to_u64()).collect::<Option<Vec<_>>>()
        } else {
            None
        };
        Self {
            inner: Arc::new(GroupData { factors, order, relations, projection, lift, radices }),
        }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.inner.factors
    }

    fn factors_display(&self) -> Vec<String> {
        self.inner.factors.iter().map(ToString::to_string).collect()
    }

    pub fn order(&self) -> &BigInt {
        &self.inner.order
    }

    /// Order as a machine integer, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.inner.radices.as_ref().map(|r| r.iter().product())
    }

    /// Number of invariant-factor coordinates.
    pub fn rank(&self) -> usize {
        self.inner.factors.len()
    }

    /// Rank of the ambient lattice `Z^c`.
    pub fn ambient_rank(&self) -> usize {
        self.inner.relations.rows()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.inner.relations
    }

    pub fn projection(&self) -> &IntMatrix {
        &self.inner.projection
    }

    pub fn lift_matrix(&self) -> &IntMatrix {
        &self.inner.lift
    }

    pub fn is_trivial(&self) -> bool {
        self.inner.factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank() <= 1
    }

    pub fn zero(&self) -> AbElement {
        AbElement { coords: vec![BigInt::zero(); self.rank()] }
    }

    /// Element with the given coordinates, reduced into `[0, f_i)`.
    pub fn element(&self, coords: &[BigInt]) -> Result<AbElement> {
        if coords.len() != self.rank() {
            return Err(Error::ParentMismatch);
        }
        Ok(self.reduce(coords.to_vec()))
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<AbElement> {
        self.element(&coords.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    fn reduce(&self, mut coords: Vec<BigInt>) -> AbElement {
        for (x, f) in coords.iter_mut().zip(&self.inner.factors) {
            *x = x.mod_floor(f);
        }
        AbElement { coords }
    }

    fn check(&self, x: &AbElement) -> Result<()> {
        let ok = x.coords.len() == self.rank()
            && x.coords.iter().zip(&self.inner.factors).all(|(c, f)| !c.is_negative_() && c < f);
        if ok {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    pub fn is_member(&self, x: &AbElement) -> bool {
        self.check(x).is_ok()
    }

    /// Unit vectors of the invariant-factor coordinates.
    pub fn basis(&self) -> Vec<AbElement> {
        (0..self.rank())
            .map(|i| {
                let mut coords = vec![BigInt::zero(); self.rank()];
                coords[i] = BigInt::one();
                AbElement { coords }
            })
            .collect()
    }

    /// Images of the ambient standard generators `e_1, ..., e_c`.
    pub fn ambient_generators(&self) -> Vec<AbElement> {
        (0..self.ambient_rank())
            .map(|j| self.reduce(self.inner.projection.column(j)))
            .collect()
    }

    /// The class `z + Im(R)` of an ambient vector.
    pub fn project(&self, z: &[BigInt]) -> Result<AbElement> {
        Ok(self.reduce(self.inner.projection.mul_vec(z)?))
    }

    /// An ambient representative of `x`.
    pub fn lift(&self, x: &AbElement) -> Result<Vec<BigInt>> {
        self.check(x)?;
        self.inner.lift.mul_vec(&x.coords)
    }

    pub fn add(&self, x: &AbElement, y: &AbElement) -> Result<AbElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.reduce(x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect()))
    }

    pub fn neg(&self, x: &AbElement) -> Result<AbElement> {
        self.check(x)?;
        Ok(self.reduce(x.coords.iter().map(|a| -a).collect()))
    }

    pub fn sub(&self, x: &AbElement, y: &AbElement) -> Result<AbElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.reduce(x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, k: &BigInt, x: &AbElement) -> Result<AbElement> {
        self.check(x)?;
        Ok(self.reduce(x.coords.iter().map(|a| a * k).collect()))
    }

    /// Least `k >= 1` with `k * x = 0`.
    pub fn element_order(&self, x: &AbElement) -> Result<BigInt> {
        self.check(x)?;
        Ok(x.coords
            .iter()
            .zip(&self.inner.factors)
            .fold(BigInt::one(), |acc, (c, f)| acc.lcm(&(f / c.gcd(f)))))
    }

    pub fn index_of(&self, x: &AbElement) -> Option<u64> {
        let radices = self.inner.radices.as_ref()?;
        let mut idx = 0u64;
        for (c, r) in x.coords.iter().zip(radices) {
            idx = idx * r + c.to_u64()?;
        }
        Some(idx)
    }

    /// Element number `idx` in mixed-radix order (last coordinate fastest).
    pub fn element_at(&self, mut idx: u64) -> Option<AbElement> {
        let radices = self.inner.radices.as_ref()?;
        if idx >= radices.iter().product::<u64>() {
            return None;
        }
        let mut coords = vec![BigInt::zero(); radices.len()];
        for (c, r) in coords.iter_mut().zip(radices).rev() {
            *c = BigInt::from(idx % r);
            idx /= r;
        }
        Some(AbElement { coords })
    }

    /// All elements in mixed-radix order. Requires the order to fit in `u64`.
    pub fn elements(&self) -> Result<impl Iterator<Item = AbElement> + '_> {
        let n = self.order_u64().ok_or_else(|| Error::BoundExceeded {
            what: "group order for element enumeration",
            count: self.order().clone(),
            cap: u64::MAX >> 1,
        })?;
        Ok((0..n).map(move |i| self.element_at(i).expect("index in range")))
    }

    pub(crate) fn radices(&self) -> Option<&[u64]> {
        self.inner.radices.as_deref()
    }
}

trait NonNeg {
    fn is_negative_(&self) -> bool;
}

impl NonNeg for BigInt {
    fn is_negative_(&self) -> bool {
        self.sign() == num_bigint::Sign::Minus
    }
}

/// Homomorphism between finite abelian groups, as a matrix acting on
/// invariant-factor coordinates (column `j` is the image of basis element `j`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbHom {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: IntMatrix,
}

impl AbHom {
    pub fn from_matrix(source: &FinAbGroup, target: &FinAbGroup, matrix: &IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix is {}x{}, groups need {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        let mut columns = Vec::with_capacity(source.rank());
        for (j, f) in source.invariant_factors().iter().enumerate() {
            let col = target.reduce(matrix.column(j));
            if !target.scale(f, &col)?.is_zero() {
                return Err(Error::NotWellDefined);
            }
            columns.push(col);
        }
        Ok(Self::from_columns(source, target, columns))
    }

    fn from_columns(source: &FinAbGroup, target: &FinAbGroup, columns: Vec<AbElement>) -> Self {
        let mut matrix = IntMatrix::zeros(target.rank(), source.rank());
        for (j, col) in columns.into_iter().enumerate() {
            for (i, x) in col.coords.into_iter().enumerate() {
                matrix[(i, j)] = x;
            }
        }
        Self { source: source.clone(), target: target.clone(), matrix }
    }

    /// The map sending the ambient generator `e_i` of `source` to
    /// `images[i]`. Fails with `NotWellDefined` unless every relation of
    /// `source` maps to zero.
    pub fn from_ambient_images(source: &FinAbGroup, target: &FinAbGroup, images: &[AbElement]) -> Result<Self> {
        if images.len() != source.ambient_rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} ambient generators",
                images.len(),
                source.ambient_rank()
            )));
        }
        for img in images {
            target.check(img)?;
        }
        let combine = |weights: &[BigInt]| -> AbElement {
            let mut acc = vec![BigInt::zero(); target.rank()];
            for (w, img) in weights.iter().zip(images) {
                if w.is_zero() {
                    continue;
                }
                for (a, x) in acc.iter_mut().zip(&img.coords) {
                    *a += w * x;
                }
            }
            target.reduce(acc)
        };
        let rel = source.relations();
        for j in 0..rel.cols() {
            if !combine(&rel.column(j)).is_zero() {
                return Err(Error::NotWellDefined);
            }
        }
        let lift = source.lift_matrix();
        let columns = (0..source.rank()).map(|j| combine(&lift.column(j))).collect();
        Ok(Self::from_columns(source, target, columns))
    }

    /// Endomorphism induced by an ambient matrix `K` (which must preserve
    /// the relation lattice).
    pub fn induced(group: &FinAbGroup, ambient: &IntMatrix) -> Result<Self> {
        let images = (0..ambient.cols())
            .map(|j| group.project(&ambient.column(j)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_ambient_images(group, group, &images)
    }

    pub fn identity(group: &FinAbGroup) -> Self {
        Self::scalar(group, &BigInt::one())
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        Self { source: source.clone(), target: target.clone(), matrix: IntMatrix::zeros(target.rank(), source.rank()) }
    }

    /// Multiplication by `k`.
    pub fn scalar(group: &FinAbGroup, k: &BigInt) -> Self {
        let columns = group.basis().iter().map(|b| group.scale(k, b).expect("basis element")).collect();
        Self::from_columns(group, group, columns)
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, x: &AbElement) -> Result<AbElement> {
        self.source.check(x)?;
        Ok(self.target.reduce(self.matrix.mul_vec(&x.coords)?))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AbHom) -> Result<AbHom> {
        if inner.target != self.source {
            return Err(Error::ParentMismatch);
        }
        let columns = (0..inner.source.rank())
            .map(|j| self.target.reduce(self.matrix.mul_vec(&inner.matrix.column(j)).expect("dims")))
            .collect();
        Ok(Self::from_columns(&inner.source, &self.target, columns))
    }

    fn zip_with(&self, other: &AbHom, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<AbHom> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ParentMismatch);
        }
        let columns = (0..self.source.rank())
            .map(|j| {
                let a = self.matrix.column(j);
                let b = other.matrix.column(j);
                self.target.reduce(a.iter().zip(&b).map(|(x, y)| f(x, y)).collect())
            })
            .collect();
        Ok(Self::from_columns(&self.source, &self.target, columns))
    }

    pub fn add(&self, other: &AbHom) -> Result<AbHom> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &AbHom) -> Result<AbHom> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self^e` by square-and-multiply.
    pub fn pow(&self, mut e: u64) -> Result<AbHom> {
        if !self.is_endomorphism() {
            return Err(Error::ParentMismatch);
        }
        let mut result = AbHom::identity(&self.source);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(result)
    }

    pub fn column_images(&self) -> Vec<AbElement> {
        (0..self.source.rank()).map(|j| AbElement { coords: self.matrix.column(j) }).collect()
    }

    pub fn image(&self) -> Result<AbSubgroup> {
        AbSubgroup::generated(&self.target, &self.column_images())
    }

    /// Bijective endomorphism test: the column images must generate the
    /// whole group.
    pub fn is_automorphism(&self) -> Result<bool> {
        if !self.is_endomorphism() {
            return Ok(false);
        }
        Ok(self.image()?.order() == self.target.order())
    }

    /// `|target / Im(self)|`.
    pub fn cokernel_order(&self) -> Result<BigInt> {
        Ok(self.target.order() / self.image()?.order())
    }

    /// Inverse of an automorphism, found by solving for the preimage of each
    /// basis element.
    pub fn inverse(&self) -> Result<AbHom> {
        if !self.is_automorphism()? {
            return Err(Error::NotBijective);
        }
        let g = &self.source;
        let k = g.rank();
        if k == 0 {
            return Ok(self.clone());
        }
        let mut system = IntMatrix::zeros(k, 2 * k);
        for i in 0..k {
            for j in 0..k {
                system[(i, j)] = self.matrix[(i, j)].clone();
            }
            system[(i, k + i)] = g.invariant_factors()[i].clone();
        }
        let decomposition = intlinalg::snf(&system)?;
        let mut columns = Vec::with_capacity(k);
        for e in g.basis() {
            let y = intlinalg::solve_with_snf(&decomposition, 2 * k, &e.coords)?
                .ok_or_else(|| Error::Inconsistency("automorphism without preimage".into()))?;
            columns.push(g.reduce(y[..k].to_vec()));
        }
        let inv = Self::from_columns(g, g, columns);
        if inv.compose(self)? != AbHom::identity(g) {
            return Err(Error::Inconsistency("computed inverse does not invert".into()));
        }
        Ok(inv)
    }
}

/// Strategy for computing the order of a generated subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderMethod {
    /// Closure enumeration when the parent order is at most [`CLOSURE_BOUND`].
    Auto,
    Closure,
    Lattice,
}

#[derive(Clone, Debug)]
pub struct AbSubgroup {
    parent: FinAbGroup,
    generators: Vec<AbElement>,
    order: BigInt,
}

impl AbSubgroup {
    pub fn generated(parent: &FinAbGroup, gens: &[AbElement]) -> Result<Self> {
        Self::generated_with(parent, gens, OrderMethod::Auto)
    }

    pub fn generated_with(parent: &FinAbGroup, gens: &[AbElement], method: OrderMethod) -> Result<Self> {
        for g in gens {
            parent.check(g)?;
        }
        let gens: Vec<AbElement> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        let order = if gens.is_empty() {
            BigInt::one()
        } else {
            let closure_ok = parent.order_u64().is_some_and(|n| n <= CLOSURE_BOUND);
            match method {
                OrderMethod::Closure if !closure_ok => {
                    return Err(Error::BoundExceeded {
                        what: "parent order for closure enumeration",
                        count: parent.order().clone(),
                        cap: CLOSURE_BOUND,
                    })
                }
                OrderMethod::Closure => closure_order(parent, &gens),
                OrderMethod::Auto if closure_ok => closure_order(parent, &gens),
                _ => lattice_order(parent, &gens)?,
            }
        };
        Ok(Self { parent: parent.clone(), generators: gens, order })
    }

    pub fn trivial(parent: &FinAbGroup) -> Self {
        Self { parent: parent.clone(), generators: Vec::new(), order: BigInt::one() }
    }

    pub fn parent(&self) -> &FinAbGroup {
        &self.parent
    }

    pub fn generators(&self) -> &[AbElement] {
        &self.generators
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    /// Membership by solving `[G | diag(f)] y = x` over the integers.
    pub fn contains(&self, x: &AbElement) -> Result<bool> {
        self.parent.check(x)?;
        if x.is_zero() {
            return Ok(true);
        }
        if self.generators.is_empty() {
            return Ok(false);
        }
        let system = lattice_system(&self.parent, &self.generators);
        Ok(intlinalg::solve_in_lattice(&system, &x.coords)?.is_some())
    }

    pub fn contains_subgroup(&self, other: &AbSubgroup) -> Result<bool> {
        if self.parent != other.parent {
            return Err(Error::ParentMismatch);
        }
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &AbSubgroup) -> Result<bool> {
        Ok(self.order == other.order && self.contains_subgroup(other)?)
    }

    /// Cyclic iff some generator-sized element has the subgroup's order;
    /// checked through the exponent, which equals the order exactly when
    /// the group is cyclic.
    pub fn is_cyclic(&self) -> Result<bool> {
        let exponent = self
            .generators
            .iter()
            .map(|g| self.parent.element_order(g))
            .try_fold(BigInt::one(), |acc, o| o.map(|o| acc.lcm(&o)))?;
        Ok(exponent == self.order)
    }

    pub fn map(&self, h: &AbHom) -> Result<AbSubgroup> {
        if h.source() != &self.parent {
            return Err(Error::ParentMismatch);
        }
        let images = self.generators.iter().map(|g| h.apply(g)).collect::<Result<Vec<_>>>()?;
        AbSubgroup::generated(h.target(), &images)
    }
}

fn lattice_system(parent: &FinAbGroup, gens: &[AbElement]) -> IntMatrix {
    let k = parent.rank();
    let r = gens.len();
    let mut m = IntMatrix::zeros(k, r + k);
    for (j, g) in gens.iter().enumerate() {
        for i in 0..k {
            m[(i, j)] = g.coords[i].clone();
        }
    }
    for (i, f) in parent.invariant_factors().iter().enumerate() {
        m[(i, r + i)] = f.clone();
    }
    m
}

fn lattice_order(parent: &FinAbGroup, gens: &[AbElement]) -> Result<BigInt> {
    if parent.is_trivial() {
        return Ok(BigInt::one());
    }
    let s = intlinalg::snf(&lattice_system(parent, gens))?;
    let index: BigInt = s.divisors.iter().product();
    Ok(parent.order() / index)
}

fn closure_order(parent: &FinAbGroup, gens: &[AbElement]) -> BigInt {
    let radices = parent.radices().expect("closure requires small parent");
    let n: u64 = radices.iter().product();
    let gen_digits: Vec<Vec<u64>> = gens
        .iter()
        .map(|g| g.coords.iter().map(|c| c.to_u64().expect("reduced coordinate")).collect())
        .collect();
    let mut seen = vec![false; n as usize];
    let mut stack = vec![0u64];
    seen[0] = true;
    let mut count = 1u64;
    let mut digits = vec![0u64; radices.len()];
    while let Some(idx) = stack.pop() {
        decode(idx, radices, &mut digits);
        for g in &gen_digits {
            let next = encode_sum(&digits, g, radices);
            if !seen[next as usize] {
                seen[next as usize] = true;
                count += 1;
                stack.push(next);
            }
        }
    }
    BigInt::from(count)
}

pub(crate) fn decode(mut idx: u64, radices: &[u64], out: &mut [u64]) {
    for (d, r) in out.iter_mut().zip(radices).rev() {
        *d = idx % r;
        idx /= r;
    }
}

pub(crate) fn encode_sum(a: &[u64], b: &[u64], radices: &[u64]) -> u64 {
    let mut idx = 0u64;
    for ((x, y), r) in a.iter().zip(b).zip(radices) {
        let mut s = x + y;
        if s >= *r {
            s -= r;
        }
        idx = idx * r + s;
    }
    idx
}

/// Sum of two mixed-radix indices without decoding into buffers.
pub(crate) fn add_indices(mut x: u64, mut y: u64, radices: &[u64]) -> u64 {
    let (mut idx, mut place) = (0u64, 1u64);
    for r in radices.iter().rev() {
        let mut s = x % r + y % r;
        if s >= *r {
            s -= r;
        }
        idx += s * place;
        place *= r;
        x /= r;
        y /= r;
    }
    idx
}

/// Number of candidate matrices in the automorphism search: entry `(i, j)`
/// ranges over `gcd(f_i, f_j)` values.
pub fn automorphism_candidate_count(g: &FinAbGroup) -> BigInt {
    let f = g.invariant_factors();
    f.iter().flat_map(|a| f.iter().map(move |b| a.gcd(b))).product()
}

/// Every automorphism of `g`, once each, in lexicographic order of the
/// row-major matrix entries.
pub fn enumerate_automorphisms(g: &FinAbGroup, cap: u64) -> Result<AutomorphismIter> {
    let count = automorphism_candidate_count(g);
    if count > BigInt::from(cap) {
        return Err(Error::BoundExceeded { what: "automorphism candidates", count, cap });
    }
    let f = g.invariant_factors();
    let k = f.len();
    let mut steps = Vec::with_capacity(k * k);
    let mut choices = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let gcd = f[i].gcd(&f[j]);
            steps.push(&f[i] / &gcd);
            choices.push(gcd.to_u64().expect("bounded by cap"));
        }
    }
    Ok(AutomorphismIter { group: g.clone(), steps, choices, counter: vec![0; k * k], done: false })
}

pub struct AutomorphismIter {
    group: FinAbGroup,
    steps: Vec<BigInt>,
    choices: Vec<u64>,
    counter: Vec<u64>,
    done: bool,
}

impl AutomorphismIter {
    fn current(&self) -> AbHom {
        let k = self.group.rank();
        let data = self.counter.iter().zip(&self.steps).map(|(t, s)| s * BigInt::from(*t)).collect();
        let matrix = IntMatrix::new(k, k, data).expect("k*k entries");
        AbHom { source: self.group.clone(), target: self.group.clone(), matrix }
    }

    fn advance(&mut self) {
        for pos in (0..self.counter.len()).rev() {
            self.counter[pos] += 1;
            if self.counter[pos] < self.choices[pos] {
                return;
            }
            self.counter[pos] = 0;
        }
        self.done = true;
    }
}

impl Iterator for AutomorphismIter {
    type Item = AbHom;

    fn next(&mut self) -> Option<AbHom> {
        while !self.done {
            let h = self.current();
            self.advance();
            if h.is_automorphism().unwrap_or(false) {
                return Some(h);
            }
        }
        None
    }
}

/// Set of elements of a small group, for brute-force checks.
pub fn element_set(g: &FinAbGroup) -> Result<HashSet<AbElement>> {
    Ok(g.elements()?.collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn phi(m: i64, n: i64, c: usize) -> IntMatrix {
        let mut a = IntMatrix::zeros(c, c);
        for i in 0..c {
            a[(i, i)] = big(n - m);
            if i + 1 < c {
                a[(i + 1, i)] = big(-m);
            }
        }
        a
    }

    #[test]
    fn quotient_shapes() {
        let g = FinAbGroup::from_relation_matrix(&phi(2, 5, 3)).unwrap();
        assert_eq!(g.invariant_factors(), &[big(27)]);
        assert_eq!(g.order(), &big(27));

        // d = 2, |n - m| / d = 2: one copy of Z_2 and Z_{2 * 2^2}.
        let g = FinAbGroup::from_relation_matrix(&phi(2, 6, 2)).unwrap();
        assert_eq!(g.invariant_factors(), &[big(2), big(8)]);
        assert_eq!(g.order(), &big(16));
    }

    #[test]
    fn trivial_quotient() {
        let g = FinAbGroup::from_relation_matrix(&phi(1, 2, 5)).unwrap();
        assert!(g.is_trivial());
        assert_eq!(g.order(), &big(1));
        assert_eq!(g.zero().coords().len(), 0);
        assert!(AbHom::identity(&g).is_automorphism().unwrap());
        assert_eq!(AbHom::identity(&g).cokernel_order().unwrap(), big(1));
    }

    #[test]
    fn singular_relations_rejected() {
        let rel = IntMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert!(matches!(FinAbGroup::from_relation_matrix(&rel), Err(Error::InfiniteQuotient)));
    }

    #[test]
    fn element_arithmetic() {
        let z4 = FinAbGroup::cyclic(4).unwrap();
        let x = z4.element_i64(&[3]).unwrap();
        assert!(z4.add(&x, &z4.neg(&x).unwrap()).unwrap().is_zero());
        assert_eq!(z4.element_order(&z4.basis()[0]).unwrap(), big(4));

        let g = FinAbGroup::from_factors(&[big(2), big(2), big(4)]).unwrap();
        let x = g.element_i64(&[1, 0, 2]).unwrap();
        assert_eq!(g.element_order(&x).unwrap(), big(2));

        let z8 = FinAbGroup::cyclic(8).unwrap();
        assert!(matches!(z4.add(&x, &x), Err(Error::ParentMismatch)));
        assert!(matches!(z4.add(&z8.element_i64(&[7]).unwrap(), &z4.zero()), Err(Error::ParentMismatch)));
    }

    #[test]
    fn homs_on_z4() {
        let z4 = FinAbGroup::cyclic(4).unwrap();
        assert!(AbHom::identity(&z4).is_automorphism().unwrap());
        assert!(AbHom::scalar(&z4, &big(3)).is_automorphism().unwrap());
        assert!(!AbHom::scalar(&z4, &big(2)).is_automorphism().unwrap());
        assert_eq!(AbHom::zero(&z4, &z4).cokernel_order().unwrap(), big(4));
        assert_eq!(AbHom::scalar(&z4, &big(2)).cokernel_order().unwrap(), big(2));
        let z9 = FinAbGroup::cyclic(9).unwrap();
        let h = AbHom::identity(&z9).sub(&AbHom::scalar(&z9, &big(3))).unwrap();
        assert_eq!(h.cokernel_order().unwrap(), big(1));
    }

    #[test]
    fn ill_defined_matrix_rejected() {
        // Z_2 -> Z_4 sending the generator to 1 is not a homomorphism.
        let z2 = FinAbGroup::cyclic(2).unwrap();
        let z4 = FinAbGroup::cyclic(4).unwrap();
        assert!(matches!(
            AbHom::from_matrix(&z2, &z4, &IntMatrix::from_rows(&[[1]])),
            Err(Error::NotWellDefined)
        ));
        assert!(AbHom::from_matrix(&z2, &z4, &IntMatrix::from_rows(&[[2]])).is_ok());
    }

    #[test]
    fn subgroups() {
        let z8 = FinAbGroup::cyclic(8).unwrap();
        assert_eq!(AbSubgroup::generated(&z8, &[]).unwrap().order(), &big(1));
        let six = z8.element_i64(&[6]).unwrap();
        let h = AbSubgroup::generated(&z8, &[six]).unwrap();
        assert_eq!(h.order(), &big(4));
        assert!(h.contains(&z8.element_i64(&[2]).unwrap()).unwrap());
        assert!(!h.contains(&z8.element_i64(&[1]).unwrap()).unwrap());
        let lat = AbSubgroup::generated_with(&z8, h.generators(), OrderMethod::Lattice).unwrap();
        assert_eq!(lat.order(), &big(4));
    }

    #[test]
    fn inverse_of_automorphism() {
        let g = FinAbGroup::from_factors(&[big(2), big(4)]).unwrap();
        for h in enumerate_automorphisms(&g, 1000).unwrap() {
            let inv = h.inverse().unwrap();
            assert_eq!(h.compose(&inv).unwrap(), AbHom::identity(&g));
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(enumerate_automorphisms(&FinAbGroup::cyclic(2).unwrap(), 10).unwrap().count(), 1);
        let units: Vec<_> = enumerate_automorphisms(&FinAbGroup::cyclic(4).unwrap(), 10)
            .unwrap()
            .map(|h| h.matrix()[(0, 0)].clone())
            .collect();
        assert_eq!(units, vec![big(1), big(3)]);
        let g = FinAbGroup::from_factors(&[big(2), big(4)]).unwrap();
        assert_eq!(automorphism_candidate_count(&g), big(32));
        assert_eq!(enumerate_automorphisms(&g, 100).unwrap().count(), 8);
        assert!(matches!(enumerate_automorphisms(&g, 31), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn index_roundtrip() {
        let g = FinAbGroup::from_factors(&[big(2), big(6)]).unwrap();
        for (i, x) in g.elements().unwrap().enumerate() {
            assert_eq!(g.index_of(&x), Some(i as u64));
        }
        assert_eq!(g.element_at(12), None);
    }
}
