//! Core domain model: trinomial specs, curves, classification decisions,
//! torus weights, and the singular-point test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intlat;
use crate::tower::{AlgNum, Tower};
use crate::upoly::UPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecKind {
    Type1,
    Type2,
}

/// A trinomial hypersurface, given by its exponent blocks: two blocks
/// (labels 1, 2) for Type 1, three blocks (labels 0, 1, 2) for Type 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrinomialSpec {
    kind: SpecKind,
    blocks: Vec<Vec<u64>>,
}

impl TrinomialSpec {
    pub fn type1(b1: Vec<u64>, b2: Vec<u64>) -> Result<TrinomialSpec> {
        Self::new(SpecKind::Type1, vec![b1, b2])
    }

    pub fn type2(b0: Vec<u64>, b1: Vec<u64>, b2: Vec<u64>) -> Result<TrinomialSpec> {
        Self::new(SpecKind::Type2, vec![b0, b1, b2])
    }

    pub fn new(kind: SpecKind, blocks: Vec<Vec<u64>>) -> Result<TrinomialSpec> {
        let want = match kind {
            SpecKind::Type1 => 2,
            SpecKind::Type2 => 3,
        };
        if blocks.len() != want {
            return Err(Error::Validation(format!(
                "expected {want} exponent blocks, got {}",
                blocks.len()
            )));
        }
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Validation("empty exponent block".into()));
            }
            if b.iter().any(|&l| l == 0) {
                return Err(Error::Validation("exponents must be positive".into()));
            }
        }
        Ok(TrinomialSpec { kind, blocks })
    }

    pub fn kind(&self) -> SpecKind {
        self.kind
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Total number of variables.
    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Paper-style label of block index `b` (0-based for Type 2, 1-based for
    /// Type 1), as used in `T[i][j]` coordinates.
    pub fn block_label(&self, b: usize) -> usize {
        match self.kind {
            SpecKind::Type1 => b + 1,
            SpecKind::Type2 => b,
        }
    }

    pub fn block_index_of_label(&self, label: usize) -> Option<usize> {
        let b = match self.kind {
            SpecKind::Type1 => label.checked_sub(1)?,
            SpecKind::Type2 => label,
        };
        (b < self.blocks.len()).then_some(b)
    }

    /// d_i = gcd of the exponents within each block.
    pub fn block_gcds(&self) -> Vec<u64> {
        self.blocks
            .iter()
            .map(|b| b.iter().fold(0u64, |g, &l| g.gcd(&l)))
            .collect()
    }

    /// Minimal exponent of each block.
    pub fn minima(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| *b.iter().min().unwrap()).collect()
    }

    /// True iff every block is a single variable (a surface for Type 2).
    pub fn is_surface(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }
}

pub fn block_gcds(spec: &TrinomialSpec) -> Vec<u64> {
    spec.block_gcds()
}

/// 1/p + 1/q + 1/r > 1, decided by the cross-multiplied integer inequality.
pub fn is_platonic(p: u64, q: u64, r: u64) -> bool {
    let (p, q, r) = (p as u128, q as u128, r as u128);
    q * r + p * r + p * q > p * q * r
}

/// The decision bundle for a spec. Type-2-only fields are `None` for Type 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub rational: bool,
    pub horizontal_exists: bool,
    pub factorial: bool,
    pub sh_exists: Option<bool>,
    pub a1_poor: Option<bool>,
    /// Minimal exponents of the three blocks, sorted descending (Type 2).
    pub platonic_triple: Option<[u64; 3]>,
}

pub fn classify(spec: &TrinomialSpec) -> Classification {
    let d = spec.block_gcds();
    match spec.kind() {
        SpecKind::Type1 => {
            let rational = d[0] == 1 || d[1] == 1 || (d[0] == 2 && d[1] == 2);
            let horizontal_exists = spec.blocks().iter().flatten().any(|&l| l == 1);
            let factorial = spec
                .blocks()
                .iter()
                .any(|b| b.len() == 1 && b[0] == 1)
                || (d[0] == 1 && d[1] == 1);
            Classification {
                rational,
                horizontal_exists,
                factorial,
                sh_exists: None,
                a1_poor: None,
                platonic_triple: None,
            }
        }
        SpecKind::Type2 => {
            let pair = |i: usize, j: usize| d[i].gcd(&d[j]);
            let coprime_to_others =
                |i: usize| (0..3).filter(|&j| j != i).all(|j| pair(i, j) == 1);
            let some_coprime = (0..3).any(coprime_to_others);
            let all_two = pair(0, 1) == 2 && pair(0, 2) == 2 && pair(1, 2) == 2;
            let rational = some_coprime || all_two;
            let mut triple: [u64; 3] = {
                let m = spec.minima();
                [m[0], m[1], m[2]]
            };
            triple.sort_unstable_by(|a, b| b.cmp(a));
            let sh = is_platonic(triple[0], triple[1], triple[2]);
            let factorial = pair(0, 1) == 1 && pair(0, 2) == 1 && pair(1, 2) == 1;
            Classification {
                rational,
                horizontal_exists: rational,
                factorial,
                sh_exists: Some(sh),
                a1_poor: Some(!sh),
                platonic_triple: Some(triple),
            }
        }
    }
}

/// A candidate polynomial curve: one coordinate polynomial per variable,
/// grouped like the spec blocks, over a shared tower.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub tower: Tower,
    pub var: String,
    pub coords: Vec<Vec<UPoly>>,
}

impl Curve {
    pub fn new(tower: Tower, var: impl Into<String>, coords: Vec<Vec<UPoly>>) -> Curve {
        Curve { tower, var: var.into(), coords }
    }

    pub fn shape_matches(&self, spec: &TrinomialSpec) -> bool {
        self.coords.len() == spec.block_count()
            && self
                .coords
                .iter()
                .zip(spec.blocks())
                .all(|(c, b)| c.len() == b.len())
    }

    pub fn is_constant(&self) -> bool {
        self.coords.iter().flatten().all(UPoly::is_constant)
    }
}

/// A point of the ambient affine space, grouped like the spec blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(pub Vec<Vec<AlgNum>>);

/// Lemma-style singularity test for Type 2: the point is singular iff for
/// every block either two coordinates vanish simultaneously, or a coordinate
/// with exponent >= 2 vanishes. The point must lie on the hypersurface.
pub fn is_singular_point(spec: &TrinomialSpec, tower: &Tower, p: &Point) -> Result<bool> {
    if spec.kind() != SpecKind::Type2 {
        return Err(Error::Precondition("singular-point test is for Type 2".into()));
    }
    if p.0.len() != spec.block_count()
        || p.0.iter().zip(spec.blocks()).any(|(c, b)| c.len() != b.len())
    {
        return Err(Error::ShapeMismatch("point shape does not match spec".into()));
    }
    let mut total = AlgNum::zero();
    for (vals, block) in p.0.iter().zip(spec.blocks()) {
        let mut prod = AlgNum::one();
        for (v, &l) in vals.iter().zip(block) {
            prod = tower.mul(&prod, &tower.pow(v, l));
        }
        total = total.add(&prod);
    }
    if !total.is_zero() {
        return Err(Error::NotOnHypersurface);
    }
    let singular = p.0.iter().zip(spec.blocks()).all(|(vals, block)| {
        let zeros: Vec<usize> = vals
            .iter()
            .enumerate()
            .filter_map(|(j, v)| v.is_zero().then_some(j))
            .collect();
        zeros.len() >= 2 || zeros.iter().any(|&j| block[j] >= 2)
    });
    Ok(singular)
}

/// Weight lattice basis of the complexity-one torus action.
pub fn torus_weights(spec: &TrinomialSpec) -> Vec<Vec<BigInt>> {
    intlat::kernel_basis(spec)
}

/// Membership of a weight vector in the lattice.
pub fn in_weight_lattice(spec: &TrinomialSpec, v: &[i64]) -> bool {
    let basis = intlat::kernel_basis(spec);
    let vv: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    if vv.len() != spec.n() {
        return false;
    }
    if basis.is_empty() {
        return vv.iter().all(BigInt::is_zero);
    }
    intlat::lattice_contains(&basis, &vv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_gcds_examples() {
        let s = TrinomialSpec::type2(vec![2, 4], vec![6], vec![8]).unwrap();
        assert_eq!(s.block_gcds(), vec![2, 6, 8]);
        let s = TrinomialSpec::type2(vec![3], vec![3], vec![3]).unwrap();
        assert_eq!(s.block_gcds(), vec![3, 3, 3]);
        let s = TrinomialSpec::type1(vec![1, 5], vec![2]).unwrap();
        assert_eq!(s.block_gcds(), vec![1, 2]);
    }

    #[test]
    fn classify_fermat_cubic_surface() {
        let s = TrinomialSpec::type2(vec![3], vec![3], vec![3]).unwrap();
        let c = classify(&s);
        assert!(!c.rational);
        assert!(!c.horizontal_exists);
    }

    #[test]
    fn classify_icosahedral_surface() {
        let s = TrinomialSpec::type2(vec![2], vec![3], vec![5]).unwrap();
        let c = classify(&s);
        assert!(c.rational);
        assert_eq!(c.sh_exists, Some(true));
        assert!(c.factorial);
        assert_eq!(c.a1_poor, Some(false));
        assert_eq!(c.platonic_triple, Some([5, 3, 2]));
    }

    #[test]
    fn classify_paper_example_spec() {
        let s = TrinomialSpec::type2(vec![2, 4], vec![6], vec![8]).unwrap();
        let c = classify(&s);
        assert!(c.rational);
        assert_eq!(c.sh_exists, Some(false));
        assert!(!c.factorial);
        assert_eq!(c.a1_poor, Some(true));
    }

    #[test]
    fn classify_pairwise_tangled_gcds() {
        let s = TrinomialSpec::type2(vec![6], vec![10], vec![15]).unwrap();
        assert!(!classify(&s).rational);
    }

    #[test]
    fn classify_type1() {
        let s = TrinomialSpec::type1(vec![2, 2], vec![2]).unwrap();
        let c = classify(&s);
        assert!(!c.horizontal_exists);
        assert!(c.rational); // d1 = d2 = 2
        let s = TrinomialSpec::type1(vec![1, 2], vec![3]).unwrap();
        assert!(classify(&s).horizontal_exists);
        // factorial: single variable with exponent 1
        let s = TrinomialSpec::type1(vec![1], vec![4]).unwrap();
        assert!(classify(&s).factorial);
    }

    #[test]
    fn singular_point_examples() {
        let t = Tower::rationals();
        let s = TrinomialSpec::type2(vec![2], vec![3], vec![5]).unwrap();
        let origin = Point(vec![vec![AlgNum::zero()], vec![AlgNum::zero()], vec![AlgNum::zero()]]);
        assert!(is_singular_point(&s, &t, &origin).unwrap());
        // (1, -1, 0) on z0^2 + z1^3 + z2^5: block 2 zero has exponent 5 >= 2,
        // but blocks 0 and 1 have no zero coordinate -> smooth
        let p = Point(vec![
            vec![AlgNum::from_int(1)],
            vec![AlgNum::from_int(-1)],
            vec![AlgNum::zero()],
        ]);
        assert!(!is_singular_point(&s, &t, &p).unwrap());
        // exponent-1 zero coordinate never makes its block singular
        let s1 = TrinomialSpec::type2(vec![2], vec![3], vec![1]).unwrap();
        let p = Point(vec![
            vec![AlgNum::from_int(1)],
            vec![AlgNum::from_int(-1)],
            vec![AlgNum::zero()],
        ]);
        assert!(!is_singular_point(&s1, &t, &p).unwrap());
        // off the hypersurface
        let p = Point(vec![
            vec![AlgNum::from_int(1)],
            vec![AlgNum::from_int(1)],
            vec![AlgNum::zero()],
        ]);
        assert_eq!(is_singular_point(&s, &t, &p).unwrap_err(), Error::NotOnHypersurface);
    }

    #[test]
    fn torus_weight_examples() {
        let s = TrinomialSpec::type2(vec![2], vec![2], vec![2]).unwrap();
        assert!(in_weight_lattice(&s, &[1, 1, 1]));
        let s = TrinomialSpec::type1(vec![2], vec![2]).unwrap();
        assert!(torus_weights(&s).is_empty());
        assert!(in_weight_lattice(&s, &[0, 0]));
        assert!(!in_weight_lattice(&s, &[1, 0]));
    }

    #[test]
    fn classification_invariant_under_block_permutation() {
        let s = TrinomialSpec::type2(vec![2, 4], vec![6], vec![8]).unwrap();
        let p = TrinomialSpec::type2(vec![6], vec![8], vec![2, 4]).unwrap();
        let (a, b) = (classify(&s), classify(&p));
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(TrinomialSpec::type2(vec![], vec![1], vec![1]).is_err());
        assert!(TrinomialSpec::type2(vec![0], vec![1], vec![1]).is_err());
        assert!(TrinomialSpec::type1(vec![1], vec![]).is_err());
    }
}
