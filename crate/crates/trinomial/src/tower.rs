//! Exact arithmetic in Q and in towers Q ⊂ R_1 ⊂ ... ⊂ R_k, where each
//! R_k = R_{k-1}[g_k]/(m_k) for a monic squarefree m_k of degree >= 2.
//!
//! Moduli need not be irreducible. Whenever a zero divisor must be
//! inverted, the operation fails with a [`ZeroDivisorWitness`] carrying a
//! monic proper factor of the offending modulus; [`Tower::split`] then
//! produces the two quotient towers and [`branch_run`] drives a computation
//! to completion across all branches (dynamic evaluation).
//!
//! Towers created through [adjoin](crate::upoly) keep their moduli squarefree
//! in every branch: a unit of the product ring projects to a unit of each
//! quotient, so the gcd certificate computed at adjoin time projects too.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result, ZeroDivisorWitness};

/// Arbitrary-precision rational; reduced form with positive denominator is
/// maintained by `num_rational` itself.
pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// An element of some tower level, in canonical nested form.
///
/// Canonical form: `Ext` has `level >= 1`, at least two coefficients, a
/// nonzero leading coefficient, every coefficient of strictly smaller level,
/// and the whole value reduced modulo every defining polynomial. Two values
/// are equal iff their representations are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgNum {
    Rat(Rat),
    Ext { level: usize, coeffs: Vec<AlgNum> },
}

impl AlgNum {
    pub fn zero() -> AlgNum {
        AlgNum::Rat(Rat::zero())
    }

    pub fn one() -> AlgNum {
        AlgNum::Rat(Rat::one())
    }

    pub fn from_int(n: i64) -> AlgNum {
        AlgNum::Rat(rat_int(n))
    }

    pub fn from_rat(r: Rat) -> AlgNum {
        AlgNum::Rat(r)
    }

    pub fn level(&self) -> usize {
        match self {
            AlgNum::Rat(_) => 0,
            AlgNum::Ext { level, .. } => *level,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, AlgNum::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, AlgNum::Rat(r) if r.is_one())
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            AlgNum::Rat(r) => Some(r),
            AlgNum::Ext { .. } => None,
        }
    }

    pub fn neg(&self) -> AlgNum {
        match self {
            AlgNum::Rat(r) => AlgNum::Rat(-r),
            AlgNum::Ext { level, coeffs } => AlgNum::Ext {
                level: *level,
                coeffs: coeffs.iter().map(|c| c.neg()).collect(),
            },
        }
    }

    pub fn add(&self, other: &AlgNum) -> AlgNum {
        match (self, other) {
            (AlgNum::Rat(a), AlgNum::Rat(b)) => AlgNum::Rat(a + b),
            (a, b) => {
                let (hi, lo, la, lb) = if a.level() >= b.level() {
                    (a, b, a.level(), b.level())
                } else {
                    (b, a, b.level(), a.level())
                };
                if la == lb {
                    // both Ext at the same level
                    let (AlgNum::Ext { coeffs: ca, .. }, AlgNum::Ext { coeffs: cb, .. }) = (hi, lo)
                    else {
                        unreachable!()
                    };
                    let n = ca.len().max(cb.len());
                    let mut out = Vec::with_capacity(n);
                    for i in 0..n {
                        let x = ca.get(i).cloned().unwrap_or_else(AlgNum::zero);
                        let y = cb.get(i).cloned().unwrap_or_else(AlgNum::zero);
                        out.push(x.add(&y));
                    }
                    ext_normalized(la, out)
                } else {
                    let AlgNum::Ext { coeffs, .. } = hi else { unreachable!() };
                    let mut out = coeffs.clone();
                    out[0] = out[0].add(lo);
                    ext_normalized(la, out)
                }
            }
        }
    }

    pub fn sub(&self, other: &AlgNum) -> AlgNum {
        self.add(&other.neg())
    }

    pub fn scale_rat(&self, k: &Rat) -> AlgNum {
        if k.is_zero() {
            return AlgNum::zero();
        }
        match self {
            AlgNum::Rat(r) => AlgNum::Rat(r * k),
            AlgNum::Ext { level, coeffs } => AlgNum::Ext {
                level: *level,
                coeffs: coeffs.iter().map(|c| c.scale_rat(k)).collect(),
            },
        }
    }

    /// Sign of the first nonzero rational entry in the nested representation
    /// (coefficients visited from the constant term upward). Used to fix the
    /// sign of square roots and rendered leading terms.
    pub fn first_sign_negative(&self) -> bool {
        match self {
            AlgNum::Rat(r) => r.is_negative(),
            AlgNum::Ext { coeffs, .. } => {
                for c in coeffs {
                    if !c.is_zero() {
                        return c.first_sign_negative();
                    }
                }
                false
            }
        }
    }
}

/// Rebuild an `Ext` in canonical form: trim the leading zeros and collapse
/// to the coefficient itself when the degree drops to zero.
fn ext_normalized(level: usize, mut coeffs: Vec<AlgNum>) -> AlgNum {
    while coeffs.len() > 1 && coeffs.last().map_or(false, AlgNum::is_zero) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        AlgNum::zero()
    } else if coeffs.len() == 1 {
        coeffs.pop().unwrap()
    } else {
        AlgNum::Ext { level, coeffs }
    }
}

// ---------------------------------------------------------------------------
// Dense coefficient-vector helpers over a tower. Constant term first.
// Shared by the tower internals and by `UPoly`.
// ---------------------------------------------------------------------------

pub(crate) fn vtrim(mut v: Vec<AlgNum>) -> Vec<AlgNum> {
    while v.last().map_or(false, AlgNum::is_zero) {
        v.pop();
    }
    v
}

pub(crate) fn vis_zero(v: &[AlgNum]) -> bool {
    v.iter().all(AlgNum::is_zero)
}

pub(crate) fn vdeg(v: &[AlgNum]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn vadd(a: &[AlgNum], b: &[AlgNum]) -> Vec<AlgNum> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i);
        let y = b.get(i);
        out.push(match (x, y) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    vtrim(out)
}

pub(crate) fn vneg(a: &[AlgNum]) -> Vec<AlgNum> {
    a.iter().map(AlgNum::neg).collect()
}

pub(crate) fn vsub(a: &[AlgNum], b: &[AlgNum]) -> Vec<AlgNum> {
    vadd(a, &vneg(b))
}

pub(crate) fn vscale(t: &Tower, a: &[AlgNum], c: &AlgNum) -> Vec<AlgNum> {
    if c.is_zero() {
        return Vec::new();
    }
    vtrim(a.iter().map(|x| t.mul(x, c)).collect())
}

/// Minimum `len(a) * len(b)` before the parallel convolution kicks in.
#[cfg(feature = "parallel")]
pub(crate) const PAR_MUL_MIN_WORK: usize = 4096;

pub(crate) fn vmul_seq(t: &Tower, a: &[AlgNum], b: &[AlgNum]) -> Vec<AlgNum> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    let mut out = vec![AlgNum::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&t.mul(x, y));
        }
    }
    vtrim(out)
}

#[cfg(feature = "parallel")]
pub(crate) fn vmul_par(t: &Tower, a: &[AlgNum], b: &[AlgNum]) -> Vec<AlgNum> {
    use rayon::prelude::*;
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    let out: Vec<AlgNum> = (0..n)
        .into_par_iter()
        .map(|k| {
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            let mut acc = AlgNum::zero();
            for i in lo..=hi {
                let (x, y) = (&a[i], &b[k - i]);
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&t.mul(x, y));
                }
            }
            acc
        })
        .collect();
    vtrim(out)
}

pub(crate) fn vmul(t: &Tower, a: &[AlgNum], b: &[AlgNum]) -> Vec<AlgNum> {
    #[cfg(feature = "parallel")]
    {
        if a.len().saturating_mul(b.len()) >= PAR_MUL_MIN_WORK {
            return vmul_par(t, a, b);
        }
    }
    vmul_seq(t, a, b)
}

/// Division by a monic divisor; needs no coefficient inversion.
pub(crate) fn vdivrem_monic(t: &Tower, num: &[AlgNum], den: &[AlgNum]) -> (Vec<AlgNum>, Vec<AlgNum>) {
    let dd = vdeg(den).expect("monic divisor is nonzero");
    debug_assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem: Vec<AlgNum> = vtrim(num.to_vec());
    if vdeg(&rem).map_or(true, |dn| dn < dd) {
        return (Vec::new(), rem);
    }
    let dn = vdeg(&rem).unwrap();
    let mut quot = vec![AlgNum::zero(); dn - dd + 1];
    while let Some(dr) = vdeg(&rem) {
        if dr < dd {
            break;
        }
        let k = dr - dd;
        let c = rem[dr].clone();
        quot[k] = c.clone();
        for (i, d) in den.iter().enumerate() {
            if !d.is_zero() {
                rem[k + i] = rem[k + i].sub(&t.mul(&c, d));
            }
        }
        rem = vtrim(rem);
    }
    (vtrim(quot), rem)
}

pub(crate) fn vrem_monic(t: &Tower, num: &[AlgNum], den: &[AlgNum]) -> Vec<AlgNum> {
    vdivrem_monic(t, num, den).1
}

/// General division; inverts the divisor's leading coefficient.
pub(crate) fn vdivrem(t: &Tower, num: &[AlgNum], den: &[AlgNum]) -> Result<(Vec<AlgNum>, Vec<AlgNum>)> {
    let dd = vdeg(den).ok_or(Error::DivisionByZero)?;
    if den[dd].is_one() {
        return Ok(vdivrem_monic(t, num, den));
    }
    let li = t.inv(&den[dd])?;
    let mon = vscale(t, den, &li);
    let (q, r) = vdivrem_monic(t, num, &mon);
    Ok((vscale(t, &q, &li), r))
}

pub(crate) fn vmonic(t: &Tower, a: &[AlgNum]) -> Result<Vec<AlgNum>> {
    match vdeg(a) {
        None => Ok(Vec::new()),
        Some(d) => {
            if a[d].is_one() {
                Ok(vtrim(a.to_vec()))
            } else {
                let li = t.inv(&a[d])?;
                Ok(vscale(t, a, &li))
            }
        }
    }
}

/// Monic gcd by Euclidean remainders; `ZeroDivisor` surfaces whenever a
/// leading coefficient fails to invert.
pub(crate) fn vgcd_monic(t: &Tower, a: &[AlgNum], b: &[AlgNum]) -> Result<Vec<AlgNum>> {
    let mut a = vtrim(a.to_vec());
    let mut b = vtrim(b.to_vec());
    if a.is_empty() && b.is_empty() {
        return Err(Error::Precondition("gcd of two zero polynomials".into()));
    }
    while !b.is_empty() {
        let (_, r) = vdivrem(t, &a, &b)?;
        a = b;
        b = r;
    }
    vmonic(t, &a)
}

pub(crate) fn vderivative(v: &[AlgNum]) -> Vec<AlgNum> {
    if v.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(v.len() - 1);
    for (k, c) in v.iter().enumerate().skip(1) {
        out.push(c.scale_rat(&rat_int(k as i64)));
    }
    vtrim(out)
}

// ---------------------------------------------------------------------------
// Tower
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct TowerLevel {
    name: String,
    /// Monic squarefree defining polynomial, dense over the levels below.
    modulus: Vec<AlgNum>,
    /// The originally requested modulus when it was replaced by its
    /// squarefree part at adjoin time.
    original: Option<Vec<AlgNum>>,
}

impl PartialEq for TowerLevel {
    fn eq(&self, other: &Self) -> bool {
        // `original` is bookkeeping, not identity.
        self.name == other.name && self.modulus == other.modulus
    }
}
impl Eq for TowerLevel {}

impl TowerLevel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn modulus(&self) -> &[AlgNum] {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn was_reduced(&self) -> bool {
        self.original.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct TowerInner {
    levels: Vec<TowerLevel>,
}

/// A chain of algebraic extensions of Q. Cheap to clone (shared inner data).
#[derive(Clone, Debug, Default)]
pub struct Tower {
    inner: Arc<TowerInner>,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}
impl Eq for Tower {}

impl Tower {
    /// The bare rationals.
    pub fn rationals() -> Tower {
        Tower::default()
    }

    pub fn height(&self) -> usize {
        self.inner.levels.len()
    }

    pub fn levels(&self) -> &[TowerLevel] {
        &self.inner.levels
    }

    pub fn level(&self, k: usize) -> &TowerLevel {
        &self.inner.levels[k - 1]
    }

    /// The generator g_k as an element.
    pub fn generator(&self, k: usize) -> AlgNum {
        assert!(k >= 1 && k <= self.height(), "level out of range");
        AlgNum::Ext {
            level: k,
            coeffs: vec![AlgNum::zero(), AlgNum::one()],
        }
    }

    pub fn generator_by_name(&self, name: &str) -> Option<AlgNum> {
        self.inner
            .levels
            .iter()
            .position(|l| l.name == name)
            .map(|i| self.generator(i + 1))
    }

    pub fn has_name(&self, name: &str) -> bool {
        self.inner.levels.iter().any(|l| l.name == name)
    }

    /// A generator name not yet used in this tower.
    pub fn fresh_name(&self, base: &str) -> String {
        if !self.has_name(base) {
            return base.to_string();
        }
        for k in 1.. {
            let cand = format!("{base}{k}");
            if !self.has_name(&cand) {
                return cand;
            }
        }
        unreachable!()
    }

    /// `self` is an initial segment of `other`.
    pub fn is_prefix_of(&self, other: &Tower) -> bool {
        self.height() <= other.height()
            && self.inner.levels[..] == other.inner.levels[..self.height()]
    }

    pub(crate) fn with_level(&self, name: String, modulus: Vec<AlgNum>, original: Option<Vec<AlgNum>>) -> Tower {
        let mut levels = self.inner.levels.clone();
        levels.push(TowerLevel { name, modulus, original });
        Tower { inner: Arc::new(TowerInner { levels }) }
    }

    /// Append an extension by `modulus` (dense, over this tower), replacing it
    /// with its squarefree part if needed. See `UPoly`-level `adjoin` for the
    /// public entry point.
    pub(crate) fn adjoin_vec(&self, name: &str, modulus: &[AlgNum]) -> Result<Tower> {
        if name.is_empty() {
            return Err(Error::Precondition("generator name must be nonempty".into()));
        }
        if self.has_name(name) {
            return Err(Error::Precondition(format!("generator name '{name}' already in use")));
        }
        let m = vtrim(modulus.to_vec());
        let d = match vdeg(&m) {
            Some(d) => d,
            None => return Err(Error::Precondition("modulus must be nonzero".into())),
        };
        if !m[d].is_one() {
            return Err(Error::Precondition("modulus must be monic".into()));
        }
        if m.iter().any(|c| c.level() > self.height()) {
            return Err(Error::TowerMismatch);
        }
        let g = vgcd_monic(self, &m, &vderivative(&m))?;
        let sf = if vdeg(&g) == Some(0) {
            m.clone()
        } else {
            // g is monic and divides m exactly
            vdivrem_monic(self, &m, &g).0
        };
        if vdeg(&sf).map_or(true, |d| d <= 1) {
            return Err(Error::DegenerateModulus);
        }
        let original = if sf == m { None } else { Some(m) };
        Ok(self.with_level(name.to_string(), sf, original))
    }

    /// Reduce a representation to canonical form relative to this tower.
    /// Canonical inputs come back unchanged.
    pub fn reduce(&self, a: &AlgNum) -> AlgNum {
        match a {
            AlgNum::Rat(_) => a.clone(),
            AlgNum::Ext { level, coeffs } => {
                assert!(*level <= self.height(), "value level exceeds tower height");
                let cs: Vec<AlgNum> = coeffs.iter().map(|c| self.reduce(c)).collect();
                let rem = vrem_monic(self, &cs, &self.inner.levels[*level - 1].modulus);
                ext_normalized(*level, rem)
            }
        }
    }

    pub fn mul(&self, a: &AlgNum, b: &AlgNum) -> AlgNum {
        match (a, b) {
            (AlgNum::Rat(x), AlgNum::Rat(y)) => AlgNum::Rat(x * y),
            (AlgNum::Rat(x), e) | (e, AlgNum::Rat(x)) => e.scale_rat(x),
            (a, b) => {
                let k = a.level().max(b.level());
                let ca = as_level_coeffs(a, k);
                let cb = as_level_coeffs(b, k);
                let prod = vmul_seq(self, ca, cb);
                let rem = vrem_monic(self, &prod, &self.inner.levels[k - 1].modulus);
                ext_normalized(k, rem)
            }
        }
    }

    pub fn pow(&self, a: &AlgNum, mut e: u64) -> AlgNum {
        let mut base = a.clone();
        let mut acc = AlgNum::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Multiplicative inverse. `ZeroDivisor` carries a monic proper factor of
    /// the modulus at the reported level.
    pub fn inv(&self, a: &AlgNum) -> Result<AlgNum> {
        match a {
            AlgNum::Rat(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(AlgNum::Rat(r.recip()))
                }
            }
            AlgNum::Ext { level, coeffs } => {
                let m = &self.inner.levels[*level - 1].modulus;
                // Extended Euclid, invariant r_i = s_i * a (mod m).
                let mut r0 = m.clone();
                let mut s0: Vec<AlgNum> = Vec::new();
                let mut r1 = coeffs.clone();
                let mut s1 = vec![AlgNum::one()];
                loop {
                    let d1 = vdeg(&r1).expect("remainder chain never hits zero before gcd");
                    let lc = r1[d1].clone();
                    if !lc.is_one() {
                        let li = self.inv(&lc)?;
                        r1 = vscale(self, &r1, &li);
                        s1 = vscale(self, &s1, &li);
                    }
                    if d1 == 0 {
                        return Ok(ext_normalized(*level, vrem_monic(self, &s1, m)));
                    }
                    let (q, r2) = vdivrem_monic(self, &r0, &r1);
                    if vis_zero(&r2) {
                        return Err(Error::ZeroDivisor(ZeroDivisorWitness {
                            level: *level,
                            factor: r1,
                        }));
                    }
                    let s2 = vsub(&s0, &vmul(self, &q, &s1));
                    r0 = r1;
                    s0 = s1;
                    r1 = r2;
                    s1 = s2;
                }
            }
        }
    }

    /// Split the level-`level` modulus along a monic proper `factor` (dense
    /// coefficients over the levels below). Returns the factor-side branch
    /// first, then the cofactor side.
    pub(crate) fn split_vec(&self, level: usize, factor: &[AlgNum]) -> Result<(Branch, Branch)> {
        if level == 0 || level > self.height() {
            return Err(Error::Precondition(format!("no tower level {level}")));
        }
        let m = &self.inner.levels[level - 1].modulus;
        let f = vtrim(factor.to_vec());
        let df = match vdeg(&f) {
            Some(d) => d,
            None => return Err(Error::NotAFactor),
        };
        let dm = m.len() - 1;
        if df == 0 || df >= dm || !f[df].is_one() || f.iter().any(|c| c.level() >= level) {
            return Err(Error::NotAFactor);
        }
        let (q, r) = vdivrem_monic(self, m, &f);
        if !vis_zero(&r) {
            return Err(Error::NotAFactor);
        }
        Ok((self.branch_with(level, f), self.branch_with(level, q)))
    }

    /// Build the branch tower in which the level-`level` modulus becomes
    /// `new_mod`. A linear `new_mod` eliminates the level entirely, pinning
    /// its generator to the root. Higher moduli are re-expressed through the
    /// branch; they stay monic, of unchanged degree, and squarefree (units
    /// project to units, so the adjoin-time gcd certificates survive).
    fn branch_with(&self, level: usize, new_mod: Vec<AlgNum>) -> Branch {
        let mut levels: Vec<TowerLevel> = self.inner.levels[..level - 1].to_vec();
        let mut map: Vec<LevelMap> = (1..level).map(LevelMap::Keep).collect();
        if new_mod.len() == 2 {
            // monic linear g + c0: generator becomes -c0
            map.push(LevelMap::Subst(new_mod[0].neg()));
        } else {
            levels.push(TowerLevel {
                name: self.inner.levels[level - 1].name.clone(),
                modulus: new_mod,
                original: None,
            });
            map.push(LevelMap::Keep(level));
        }
        for j in level + 1..=self.height() {
            let src = &self.inner.levels[j - 1];
            let partial = Tower { inner: Arc::new(TowerInner { levels: levels.clone() }) };
            let projected: Vec<AlgNum> = src
                .modulus
                .iter()
                .map(|c| project_with(&partial, &map, c))
                .collect();
            let new_index = levels.len() + 1;
            levels.push(TowerLevel {
                name: src.name.clone(),
                modulus: projected,
                original: None,
            });
            map.push(LevelMap::Keep(new_index));
        }
        Branch {
            tower: Tower { inner: Arc::new(TowerInner { levels }) },
            map,
        }
    }
}

#[derive(Clone, Debug)]
enum LevelMap {
    /// Old level k now lives at the given new level.
    Keep(usize),
    /// Old level k was eliminated; its generator equals this value.
    Subst(AlgNum),
}

fn project_with(target: &Tower, map: &[LevelMap], a: &AlgNum) -> AlgNum {
    match a {
        AlgNum::Rat(_) => a.clone(),
        AlgNum::Ext { level, coeffs } => {
            let at = match &map[*level - 1] {
                LevelMap::Keep(nl) => target.generator(*nl),
                LevelMap::Subst(v) => v.clone(),
            };
            let mut acc = AlgNum::zero();
            for c in coeffs.iter().rev() {
                acc = target.mul(&acc, &at).add(&project_with(target, map, c));
            }
            acc
        }
    }
}

/// One side of a [`Tower::split`]: the branch tower together with the rule
/// projecting values of the parent tower into it.
#[derive(Clone, Debug)]
pub struct Branch {
    tower: Tower,
    map: Vec<LevelMap>,
}

impl Branch {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// Project a parent-tower value into this branch (total; never fails).
    pub fn project_num(&self, a: &AlgNum) -> AlgNum {
        project_with(&self.tower, &self.map, a)
    }
}

/// Outcome of one dynamic-evaluation branch.
#[derive(Clone, Debug)]
pub struct BranchValue<T> {
    pub tower: Tower,
    pub value: T,
}

/// Run `f` over `base`, splitting the tower and re-running whenever `f`
/// reports a [`Error::ZeroDivisor`]. `f` receives the branch tower and a
/// projector taking base-tower values into the branch. Branch order is
/// deterministic: at each split the factor side is explored first.
pub fn branch_run<T>(
    base: &Tower,
    mut f: impl FnMut(&Tower, &dyn Fn(&AlgNum) -> AlgNum) -> Result<T>,
) -> Result<Vec<BranchValue<T>>> {
    let mut out = Vec::new();
    let mut stack: Vec<(Tower, Vec<Branch>)> = vec![(base.clone(), Vec::new())];
    while let Some((t, chain)) = stack.pop() {
        let project = |a: &AlgNum| chain.iter().fold(a.clone(), |v, b| b.project_num(&v));
        match f(&t, &project) {
            Ok(v) => out.push(BranchValue { tower: t, value: v }),
            Err(Error::ZeroDivisor(zd)) => {
                let (b1, b2) = t.split_vec(zd.level, &zd.factor)?;
                for b in [b2, b1] {
                    let mut chain2 = chain.clone();
                    let t2 = b.tower.clone();
                    chain2.push(b);
                    stack.push((t2, chain2));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn as_level_coeffs(a: &AlgNum, k: usize) -> &[AlgNum] {
    match a {
        AlgNum::Ext { level, coeffs } if *level == k => coeffs,
        _ => std::slice::from_ref(a),
    }
}

// Multiplying a lower-level value requires a one-element slice view; the
// borrow in `mul` needs the operands to outlive the call, hence this free
// function instead of a closure.

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Tower {
        Tower::rationals()
    }

    /// Q[g]/(g^3 + 1): reducible but squarefree.
    fn cube_tower() -> Tower {
        q().adjoin_vec(
            "g",
            &[AlgNum::from_int(1), AlgNum::zero(), AlgNum::zero(), AlgNum::one()],
        )
        .unwrap()
    }

    #[test]
    fn adjoin_replaces_non_squarefree_modulus() {
        // g^4 + 2 g^2 + 1 = (g^2+1)^2 -> g^2 + 1
        let t = q()
            .adjoin_vec(
                "g",
                &[
                    AlgNum::from_int(1),
                    AlgNum::zero(),
                    AlgNum::from_int(2),
                    AlgNum::zero(),
                    AlgNum::one(),
                ],
            )
            .unwrap();
        assert_eq!(t.level(1).modulus(), &[AlgNum::from_int(1), AlgNum::zero(), AlgNum::one()]);
        assert!(t.level(1).was_reduced());
    }

    #[test]
    fn adjoin_rejects_degenerate_modulus() {
        // g - 3
        let e = q().adjoin_vec("g", &[AlgNum::from_int(-3), AlgNum::one()]);
        assert_eq!(e.unwrap_err(), Error::DegenerateModulus);
    }

    #[test]
    fn inv_of_epsilon_in_cube_tower() {
        // eps^3 = -1, so inv(eps) = -eps^2
        let t = cube_tower();
        let eps = t.generator(1);
        let inv = t.inv(&eps).unwrap();
        let expected = AlgNum::Ext {
            level: 1,
            coeffs: vec![AlgNum::zero(), AlgNum::zero(), AlgNum::from_int(-1)],
        };
        assert_eq!(inv, expected);
        assert!(t.mul(&eps, &inv).is_one());
    }

    #[test]
    fn inv_of_rational() {
        let t = q();
        assert_eq!(t.inv(&AlgNum::from_rat(rat(2, 3))).unwrap(), AlgNum::from_rat(rat(3, 2)));
        assert_eq!(t.inv(&AlgNum::zero()).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn inv_detects_zero_divisor() {
        // Q[g]/(g^2 - 1); g - 1 is a zero divisor.
        let t = q()
            .adjoin_vec("g", &[AlgNum::from_int(-1), AlgNum::zero(), AlgNum::one()])
            .unwrap();
        let a = t.generator(1).sub(&AlgNum::one());
        match t.inv(&a).unwrap_err() {
            Error::ZeroDivisor(w) => {
                assert_eq!(w.level, 1);
                // factor is monic g - 1
                assert_eq!(w.factor, vec![AlgNum::from_int(-1), AlgNum::one()]);
                // and divides the modulus exactly
                let (_, r) = vdivrem_monic(&t, t.level(1).modulus(), &w.factor);
                assert!(vis_zero(&r));
            }
            e => panic!("expected zero divisor, got {e:?}"),
        }
    }

    #[test]
    fn split_linear_factors_eliminate_the_level() {
        let t = q()
            .adjoin_vec("g", &[AlgNum::from_int(-1), AlgNum::zero(), AlgNum::one()])
            .unwrap();
        let (b1, b2) = t
            .split_vec(1, &[AlgNum::from_int(-1), AlgNum::one()])
            .unwrap();
        assert_eq!(b1.tower().height(), 0);
        assert_eq!(b2.tower().height(), 0);
        // g projects to 1 on the (g - 1) side and to -1 on the other
        assert_eq!(b1.project_num(&t.generator(1)), AlgNum::from_int(1));
        assert_eq!(b2.project_num(&t.generator(1)), AlgNum::from_int(-1));
    }

    #[test]
    fn split_moduli_multiply_back() {
        // g^4 - 5 g^2 + 4 = (g^2 - 1)(g^2 - 4)
        let t = q()
            .adjoin_vec(
                "g",
                &[
                    AlgNum::from_int(4),
                    AlgNum::zero(),
                    AlgNum::from_int(-5),
                    AlgNum::zero(),
                    AlgNum::one(),
                ],
            )
            .unwrap();
        let f = vec![AlgNum::from_int(-1), AlgNum::zero(), AlgNum::one()];
        let (b1, b2) = t.split_vec(1, &f).unwrap();
        let m1 = b1.tower().level(1).modulus().to_vec();
        let m2 = b2.tower().level(1).modulus().to_vec();
        assert_eq!(vmul(&q(), &m1, &m2), t.level(1).modulus().to_vec());
    }

    #[test]
    fn split_rejects_non_factor() {
        let t = cube_tower();
        // x^2 + x does not divide g^3 + 1
        let e = t.split_vec(1, &[AlgNum::zero(), AlgNum::one(), AlgNum::one()]);
        assert_eq!(e.unwrap_err(), Error::NotAFactor);
    }

    #[test]
    fn reduce_is_idempotent_on_canonical_values() {
        let t = cube_tower();
        let g = t.generator(1);
        let val = t.mul(&t.pow(&g, 5), &AlgNum::from_rat(rat(3, 7))).add(&AlgNum::from_int(2));
        assert_eq!(t.reduce(&val), val);
    }

    #[test]
    fn branch_run_conjoins_over_splits() {
        // Over Q[g]/(g^2-1), ask in every branch whether g - 1 is zero.
        let t = q()
            .adjoin_vec("g", &[AlgNum::from_int(-1), AlgNum::zero(), AlgNum::one()])
            .unwrap();
        let a = t.generator(1).sub(&AlgNum::one());
        let res = branch_run(&t, |tw, proj| {
            let v = proj(&a);
            if v.is_zero() {
                return Ok(true);
            }
            match tw.inv(&v) {
                Ok(_) => Ok(false),
                Err(e) => Err(e),
            }
        })
        .unwrap();
        let values: Vec<bool> = res.iter().map(|b| b.value).collect();
        assert_eq!(values.len(), 2);
        assert!(values.contains(&true) && values.contains(&false));
    }

    #[test]
    fn two_level_tower_arithmetic() {
        // Q(i)(s), s^2 = 3
        let t = q()
            .adjoin_vec("i", &[AlgNum::from_int(1), AlgNum::zero(), AlgNum::one()])
            .unwrap();
        let t = t
            .adjoin_vec("s", &[AlgNum::from_int(-3), AlgNum::zero(), AlgNum::one()])
            .unwrap();
        let i = t.generator(1);
        let s = t.generator(2);
        let x = t.mul(&i, &s); // i*s
        assert_eq!(t.mul(&x, &x), AlgNum::from_int(-3));
        let xi = t.inv(&x).unwrap();
        assert!(t.mul(&x, &xi).is_one());
    }
}
