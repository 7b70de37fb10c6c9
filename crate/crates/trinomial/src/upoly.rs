//! Univariate polynomial algebra over a tower level.
//!
//! Dense representation, constant term first. The zero polynomial has an
//! empty coefficient vector and degree `None`; `Option<usize>` already
//! orders `None` below every `Some`, which is exactly the NEG_INF sentinel
//! the degree arithmetic needs.

use num_integer::Roots;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::tower::{
    self, rat_int, vadd, vdeg, vderivative, vdivrem, vdivrem_monic, vgcd_monic, vis_zero, vmonic,
    vmul, vmul_seq, vneg, vscale, vsub, vtrim, AlgNum, Rat, Tower,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    tower: Tower,
    coeffs: Vec<AlgNum>,
}

impl UPoly {
    pub fn zero(tower: &Tower) -> UPoly {
        UPoly { tower: tower.clone(), coeffs: Vec::new() }
    }

    pub fn one(tower: &Tower) -> UPoly {
        UPoly::constant(tower, AlgNum::one())
    }

    pub fn constant(tower: &Tower, c: AlgNum) -> UPoly {
        UPoly { tower: tower.clone(), coeffs: vtrim(vec![c]) }
    }

    /// The variable x.
    pub fn x(tower: &Tower) -> UPoly {
        UPoly::monomial(tower, AlgNum::one(), 1)
    }

    pub fn monomial(tower: &Tower, c: AlgNum, k: usize) -> UPoly {
        if c.is_zero() {
            return UPoly::zero(tower);
        }
        let mut coeffs = vec![AlgNum::zero(); k + 1];
        coeffs[k] = c;
        UPoly { tower: tower.clone(), coeffs }
    }

    pub fn from_coeffs(tower: &Tower, coeffs: Vec<AlgNum>) -> UPoly {
        UPoly { tower: tower.clone(), coeffs: vtrim(coeffs) }
    }

    pub fn from_int_coeffs(tower: &Tower, coeffs: &[i64]) -> UPoly {
        UPoly::from_coeffs(tower, coeffs.iter().map(|&n| AlgNum::from_int(n)).collect())
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn coeffs(&self) -> &[AlgNum] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> AlgNum {
        self.coeffs.get(k).cloned().unwrap_or_else(AlgNum::zero)
    }

    /// Degree; `None` for the zero polynomial (ordered below every `Some`).
    pub fn degree(&self) -> Option<usize> {
        vdeg(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&AlgNum> {
        self.coeffs.last()
    }

    /// Re-express this polynomial over a taller tower (`self.tower` must be a
    /// prefix of `target`).
    pub fn lift(&self, target: &Tower) -> Result<UPoly> {
        if self.tower == *target {
            return Ok(self.clone());
        }
        if !self.tower.is_prefix_of(target) {
            return Err(Error::TowerMismatch);
        }
        Ok(UPoly { tower: target.clone(), coeffs: self.coeffs.clone() })
    }

    fn unified(&self, other: &UPoly) -> (Tower, UPoly, UPoly) {
        if self.tower == other.tower {
            (self.tower.clone(), self.clone(), other.clone())
        } else if self.tower.is_prefix_of(&other.tower) {
            (other.tower.clone(), self.lift(&other.tower).unwrap(), other.clone())
        } else if other.tower.is_prefix_of(&self.tower) {
            (self.tower.clone(), self.clone(), other.lift(&self.tower).unwrap())
        } else {
            panic!("polynomial operands over incompatible towers");
        }
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let (t, a, b) = self.unified(other);
        UPoly { coeffs: vadd(&a.coeffs, &b.coeffs), tower: t }
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let (t, a, b) = self.unified(other);
        UPoly { coeffs: vsub(&a.coeffs, &b.coeffs), tower: t }
    }

    pub fn neg(&self) -> UPoly {
        UPoly { tower: self.tower.clone(), coeffs: vneg(&self.coeffs) }
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        let (t, a, b) = self.unified(other);
        UPoly { coeffs: vmul(&t, &a.coeffs, &b.coeffs), tower: t }
    }

    /// Sequential convolution, always available; the dispatching [`UPoly::mul`]
    /// switches to the rayon path for large operands when the `parallel`
    /// feature is on.
    pub fn mul_seq(&self, other: &UPoly) -> UPoly {
        let (t, a, b) = self.unified(other);
        UPoly { coeffs: vmul_seq(&t, &a.coeffs, &b.coeffs), tower: t }
    }

    #[cfg(feature = "parallel")]
    pub fn mul_par(&self, other: &UPoly) -> UPoly {
        let (t, a, b) = self.unified(other);
        UPoly { coeffs: tower::vmul_par(&t, &a.coeffs, &b.coeffs), tower: t }
    }

    pub fn scale(&self, c: &AlgNum) -> UPoly {
        UPoly { tower: self.tower.clone(), coeffs: vscale(&self.tower, &self.coeffs, c) }
    }

    pub fn pow(&self, mut e: u64) -> UPoly {
        let mut base = self.clone();
        let mut acc = UPoly::one(&self.tower);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly { tower: self.tower.clone(), coeffs: vderivative(&self.coeffs) }
    }

    pub fn eval(&self, at: &AlgNum) -> AlgNum {
        let mut acc = AlgNum::zero();
        for c in self.coeffs.iter().rev() {
            acc = self.tower.mul(&acc, at).add(c);
        }
        acc
    }

    pub fn compose(&self, inner: &UPoly) -> UPoly {
        let (t, outer, inner) = self.unified(inner);
        let mut acc = UPoly::zero(&t);
        for c in outer.coeffs.iter().rev() {
            acc = acc.mul(&inner).add(&UPoly::constant(&t, c.clone()));
        }
        acc
    }

    pub fn div_rem(&self, divisor: &UPoly) -> Result<(UPoly, UPoly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (t, a, b) = self.unified(divisor);
        let (q, r) = vdivrem(&t, &a.coeffs, &b.coeffs)?;
        Ok((UPoly { coeffs: q, tower: t.clone() }, UPoly { coeffs: r, tower: t }))
    }

    /// Exact quotient; `NotDivisible` when a remainder survives.
    pub fn exact_div(&self, divisor: &UPoly) -> Result<UPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    pub fn monic(&self) -> Result<UPoly> {
        Ok(UPoly { tower: self.tower.clone(), coeffs: vmonic(&self.tower, &self.coeffs)? })
    }

    /// Monic generator of the ideal (p, q); a constant 1 means coprime.
    pub fn gcd_monic(p: &UPoly, q: &UPoly) -> Result<UPoly> {
        if p.is_zero() && q.is_zero() {
            return Err(Error::Precondition("gcd of two zero polynomials".into()));
        }
        let (t, a, b) = p.unified(q);
        Ok(UPoly { coeffs: vgcd_monic(&t, &a.coeffs, &b.coeffs)?, tower: t })
    }

    /// Squarefree part (monic) and its degree, i.e. the number of distinct
    /// roots d_0(p). Constants yield (1, 0).
    pub fn radical_and_d0(&self) -> Result<(UPoly, usize)> {
        if self.is_zero() {
            return Err(Error::Precondition("radical of the zero polynomial".into()));
        }
        let g = UPoly::gcd_monic(self, &self.derivative())?;
        let rad = self.exact_div(&g)?.monic()?;
        let d0 = rad.degree().unwrap_or(0);
        Ok((rad, d0))
    }

    /// Polynomial square root. If the leading coefficient is not a rational
    /// square, a square root of it is adjoined (modulus y^2 - lc) and the
    /// result lives over the extended tower. The sign is normalized so the
    /// first nonzero rational entry of the leading coefficient is positive.
    pub fn poly_sqrt(&self) -> Result<(UPoly, Tower)> {
        if self.is_zero() {
            return Err(Error::Precondition("square root of the zero polynomial".into()));
        }
        let deg = self.degree().unwrap();
        if deg % 2 != 0 {
            return Err(Error::NotASquare);
        }
        let lc = self.leading_coeff().unwrap().clone();
        let (t, rho) = match rational_sqrt(&lc) {
            Some(r) => (self.tower.clone(), r),
            None => {
                let name = self.tower.fresh_name("r");
                let t2 = self
                    .tower
                    .adjoin_vec(&name, &[lc.neg(), AlgNum::zero(), AlgNum::one()])?;
                let g = t2.generator(t2.height());
                (t2, g)
            }
        };
        let p = self.lift(&t)?;
        let d = deg / 2;
        let two_rho_inv = t.inv(&rho.add(&rho))?;
        let mut g = vec![AlgNum::zero(); d + 1];
        g[d] = rho;
        for k in (0..d).rev() {
            // coefficient of x^(d+k) in g^2, excluding the 2*g_d... cross term with g_k
            let mut s = AlgNum::zero();
            for i in k + 1..=d {
                let j = d + k - i;
                if j > d || j <= k {
                    continue;
                }
                s = s.add(&t.mul(&g[i], &g[j]));
            }
            let c = p.coeff(d + k).sub(&s);
            g[k] = t.mul(&c, &two_rho_inv);
        }
        let mut root = UPoly { tower: t.clone(), coeffs: vtrim(g) };
        let defect = root.mul(&root).sub(&p);
        if !defect.is_zero() {
            // Definitive failure when any defect coefficient is a unit;
            // otherwise surface the first zero divisor so the caller can
            // split the tower and retry per branch.
            let mut first_zd: Option<Error> = None;
            for c in defect.coeffs.iter().filter(|c| !c.is_zero()) {
                match t.inv(c) {
                    Ok(_) => return Err(Error::NotASquare),
                    Err(e @ Error::ZeroDivisor(_)) => {
                        if first_zd.is_none() {
                            first_zd = Some(e);
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
            return Err(first_zd.unwrap_or(Error::NotASquare));
        }
        if root.leading_coeff().map_or(false, AlgNum::first_sign_negative) {
            root = root.neg();
        }
        Ok((root, t))
    }

    /// `Some(lambda)` with `p = lambda * q` when the two polynomials are
    /// proportional; the decision itself is division-free.
    pub fn is_proportional(p: &UPoly, q: &UPoly) -> Result<Option<AlgNum>> {
        if p.is_zero() {
            return Ok(Some(AlgNum::zero()));
        }
        if q.is_zero() {
            return Ok(None);
        }
        if p.degree() != q.degree() {
            return Ok(None);
        }
        let (t, a, b) = p.unified(q);
        let la = a.leading_coeff().unwrap().clone();
        let lb = b.leading_coeff().unwrap().clone();
        if !b.scale(&la).sub(&a.scale(&lb)).is_zero() {
            return Ok(None);
        }
        let lam = t.mul(&la, &t.inv(&lb)?);
        Ok(Some(lam))
    }

    /// True iff the polynomial is nonzero in every dynamic-evaluation branch
    /// of its tower. A unit coefficient certifies a branch; zero divisors
    /// trigger splits.
    pub fn nonzero_in_all_branches(&self) -> Result<bool> {
        let outcomes = tower::branch_run(&self.tower, |t, proj| {
            let w = vtrim(self.coeffs.iter().map(proj).collect());
            if w.is_empty() {
                return Ok(false);
            }
            let mut first_zd: Option<Error> = None;
            for c in w.iter().filter(|c| !c.is_zero()) {
                match t.inv(c) {
                    Ok(_) => return Ok(true),
                    Err(e @ Error::ZeroDivisor(_)) => {
                        if first_zd.is_none() {
                            first_zd = Some(e);
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
            Err(first_zd.expect("nonzero polynomial has a nonzero coefficient"))
        })?;
        Ok(outcomes.iter().all(|b| b.value))
    }

    /// Project every coefficient through `proj` (a branch projector).
    pub fn map_into(&self, target: &Tower, proj: &dyn Fn(&AlgNum) -> AlgNum) -> UPoly {
        UPoly {
            tower: target.clone(),
            coeffs: vtrim(self.coeffs.iter().map(proj).collect()),
        }
    }
}

/// Square root of a rational if it is one: both numerator and denominator
/// must be perfect squares and the value nonnegative.
fn rational_sqrt(a: &AlgNum) -> Option<AlgNum> {
    let r = a.as_rat()?;
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(AlgNum::zero());
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(AlgNum::from_rat(Rat::new(n, d)))
    } else {
        None
    }
}

impl Tower {
    /// Extend the tower by a generator satisfying `defining` (monic, over the
    /// top level). A non-squarefree defining polynomial is replaced by its
    /// squarefree part, recorded on the new level.
    pub fn adjoin(&self, name: &str, defining: &UPoly) -> Result<Tower> {
        if !defining.tower().is_prefix_of(self) && defining.tower() != self {
            return Err(Error::TowerMismatch);
        }
        self.adjoin_vec(name, defining.coeffs())
    }

    /// Split the level-`level` modulus along a monic proper factor; returns
    /// the factor-side branch first. Each branch carries the projection rule
    /// for existing values.
    pub fn split(&self, level: usize, factor: &UPoly) -> Result<(tower::Branch, tower::Branch)> {
        self.split_vec(level, factor.coeffs())
    }
}

/// x^k with rational scale, a convenience used all over the constructions.
pub fn xpow(tower: &Tower, k: usize) -> UPoly {
    UPoly::monomial(tower, AlgNum::one(), k)
}

/// The polynomial c (rational) as a UPoly.
pub fn int_poly(tower: &Tower, c: i64) -> UPoly {
    UPoly::constant(tower, AlgNum::from_int(c))
}

/// 2^e as an AlgNum, for the exact powers the constructions need.
pub fn pow2(e: u32) -> AlgNum {
    AlgNum::from_rat(rat_int(2).pow(e as i32))
}
