//! Integer subroutines: positive Bezout pairs, kernel lattices of the
//! torus-weight relations, and all-positive numerical semigroup
//! representations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{SpecKind, TrinomialSpec};

/// The pair (u, v) with v*r - u*m = 1, u and v positive and u minimal.
pub fn positive_bezout(r: u64, m: u64) -> Result<(u64, u64)> {
    if r == 0 || m == 0 {
        return Err(Error::Precondition("positive_bezout needs positive arguments".into()));
    }
    if r.gcd(&m) != 1 {
        return Err(Error::NotCoprime);
    }
    // u = -m^{-1} mod r, smallest positive representative (u = r when r = 1
    // degenerates to u = 1).
    let u: u128 = if r == 1 {
        1
    } else {
        let mi = mod_inverse(m as u128 % r as u128, r as u128);
        let neg = (r as u128 - mi) % r as u128;
        if neg == 0 {
            r as u128
        } else {
            neg
        }
    };
    let v = (1 + u * m as u128) / r as u128;
    debug_assert_eq!(v * r as u128 - u * m as u128, 1);
    Ok((u as u64, v as u64))
}

fn mod_inverse(a: u128, n: u128) -> u128 {
    // extended Euclid over i128; n fits since the callers cap at u64
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "inverse demands coprimality");
    t.rem_euclid(n as i128) as u128
}

/// Saturated basis of the integer kernel lattice of the block exponent
/// relations: for Type 1 both weighted block sums vanish; for Type 2 the
/// three weighted block sums agree. Rank is n - 2 (n - rank of the relation
/// matrix). The basis is returned in row Hermite normal form, so it is
/// deterministic.
pub fn kernel_basis(spec: &TrinomialSpec) -> Vec<Vec<BigInt>> {
    let n = spec.n();
    let blocks = spec.blocks();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let offset = |b: usize| -> usize { blocks[..b].iter().map(|v| v.len()).sum() };
    match spec.kind() {
        SpecKind::Type1 => {
            for b in 0..2 {
                let mut row = vec![BigInt::zero(); n];
                for (j, &l) in blocks[b].iter().enumerate() {
                    row[offset(b) + j] = BigInt::from(l);
                }
                rows.push(row);
            }
        }
        SpecKind::Type2 => {
            for b in 0..2 {
                let mut row = vec![BigInt::zero(); n];
                for (j, &l) in blocks[b].iter().enumerate() {
                    row[offset(b) + j] = BigInt::from(l);
                }
                for (j, &l) in blocks[b + 1].iter().enumerate() {
                    row[offset(b + 1) + j] = -BigInt::from(l);
                }
                rows.push(row);
            }
        }
    }
    let basis = integer_kernel(&rows, n);
    hermite_rows(basis)
}

/// Kernel of the row matrix by unimodular column reduction: maintain U with
/// A U alongside; columns of U where A U vanishes span the kernel, and a
/// kernel obtained this way is automatically saturated.
fn integer_kernel(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    // u is column-major-ish: u[c] is the c-th column of U as a vector
    let m = a.len();
    let mut pinned = vec![false; n];
    for r in 0..m {
        loop {
            // among free columns with nonzero entry in row r, find min |entry|
            let mut best: Option<usize> = None;
            for c in 0..n {
                if pinned[c] || a[r][c].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(c),
                    Some(b) => {
                        if a[r][c].abs() < a[r][b].abs() {
                            Some(c)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            let Some(p) = best else { break };
            let mut done = true;
            for c in 0..n {
                if c == p || pinned[c] || a[r][c].is_zero() {
                    continue;
                }
                let q = div_round(&a[r][c], &a[r][p]);
                if !q.is_zero() {
                    for rr in 0..m {
                        let s = &a[rr][p] * &q;
                        a[rr][c] -= s;
                    }
                    for i in 0..n {
                        let s = &u[i][p] * &q;
                        u[i][c] -= s;
                    }
                }
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                pinned[p] = true;
                break;
            }
        }
    }
    let mut kernel = Vec::new();
    for c in 0..n {
        if (0..m).all(|r| a[r][c].is_zero()) {
            kernel.push((0..n).map(|i| u[i][c].clone()).collect());
        }
    }
    kernel
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest-integer quotient keeps the reduction entries small
    let (q, r) = a.div_rem(b);
    let two_r = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Row Hermite normal form with positive pivots and entries above each pivot
/// reduced; canonicalizes a lattice basis.
fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return rows;
    }
    let n = rows[0].len();
    let mut pivot_row = 0;
    for col in 0..n {
        // euclid the column below pivot_row to a single nonzero entry
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(r),
                    Some(b) => {
                        if rows[r][col].abs() < rows[b][col].abs() {
                            Some(r)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            let Some(p) = best else { break };
            rows.swap(pivot_row, p);
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = div_round(&rows[r][col], &rows[pivot_row][col]);
                for c in 0..n {
                    let s = &rows[pivot_row][c] * &q;
                    rows[r][c] -= s;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row..].iter().all(|r| r[col].is_zero()) {
            continue;
        }
        if rows[pivot_row][col].is_negative() {
            for c in 0..n {
                rows[pivot_row][c] = -rows[pivot_row][c].clone();
            }
        }
        // reduce entries above the pivot
        for r in 0..pivot_row {
            let q = rows[r][col].div_floor(&rows[pivot_row][col]);
            if !q.is_zero() {
                for c in 0..n {
                    let s = &rows[pivot_row][c] * &q;
                    rows[r][c] -= s;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows
}

/// Membership in the lattice spanned by `basis` (rows), via Hermite
/// reduction of the vector against the basis.
pub fn lattice_contains(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let hnf = hermite_rows(basis.to_vec());
    let mut v = v.to_vec();
    let n = v.len();
    for row in &hnf {
        let col = match row.iter().position(|x| !x.is_zero()) {
            Some(c) => c,
            None => continue,
        };
        if v[col].is_zero() {
            continue;
        }
        let (q, r) = v[col].div_rem(&row[col]);
        if !r.is_zero() {
            return false;
        }
        for c in 0..n {
            let s = &row[c] * &q;
            v[c] -= s;
        }
    }
    v.iter().all(BigInt::is_zero)
}

/// Lexicographically smallest b with every b_j >= 1 and sum b_j gens_j =
/// target, by a reachability table over the suffix generators.
pub fn represent_in_semigroup(target: u64, gens: &[u64]) -> Result<Vec<u64>> {
    if gens.is_empty() || gens.iter().any(|&g| g == 0) {
        return Err(Error::Precondition("generators must be positive".into()));
    }
    let base: u64 = gens.iter().sum();
    if target < base {
        return Err(Error::NotRepresentable);
    }
    let slack = (target - base) as usize;
    let n = gens.len();
    // feas[i][a]: amount a reachable with nonnegative multiples of gens[i..]
    let mut feas = vec![vec![false; slack + 1]; n + 1];
    feas[n][0] = true;
    for i in (0..n).rev() {
        let g = gens[i] as usize;
        for a in 0..=slack {
            feas[i][a] = feas[i + 1][a] || (a >= g && feas[i][a - g]);
        }
    }
    if !feas[0][slack] {
        return Err(Error::NotRepresentable);
    }
    let mut out = Vec::with_capacity(n);
    let mut rem = slack;
    for i in 0..n {
        let g = gens[i] as usize;
        let mut e = 0u64;
        let mut r = rem;
        while !feas[i + 1][r] {
            debug_assert!(r >= g, "feasibility table promised a representation");
            r -= g;
            e += 1;
        }
        out.push(e + 1);
        rem = r;
    }
    debug_assert_eq!(rem, 0);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn bezout_examples() {
        assert_eq!(positive_bezout(5, 6).unwrap(), (4, 5));
        assert_eq!(positive_bezout(1, 6).unwrap(), (1, 7));
        assert_eq!(positive_bezout(3, 9).unwrap_err(), Error::NotCoprime);
    }

    #[test]
    fn bezout_u_is_minimal() {
        for r in 1..40u64 {
            for m in 1..40u64 {
                if num_integer::gcd(r, m) != 1 {
                    continue;
                }
                let (u, v) = positive_bezout(r, m).unwrap();
                assert_eq!(v as i128 * r as i128 - u as i128 * m as i128, 1);
                for u2 in 1..u {
                    // no smaller positive u admits an integral positive v
                    assert_ne!((1 + u2 as i128 * m as i128) % r as i128, 0, "r={r} m={m}");
                }
            }
        }
    }

    #[test]
    fn kernel_contains_paper_weight_vectors() {
        // blocks (2,4),(6),(8): the published torus action gives the weight
        // vectors (12,0,4,3) and (-2,1,0,0)
        let spec = TrinomialSpec::type2(vec![2, 4], vec![6], vec![8]).unwrap();
        let basis = kernel_basis(&spec);
        assert_eq!(basis.len(), 2);
        assert!(lattice_contains(&basis, &big(&[12, 0, 4, 3])));
        assert!(lattice_contains(&basis, &big(&[-2, 1, 0, 0])));
        assert!(!lattice_contains(&basis, &big(&[1, 0, 0, 0])));
    }

    #[test]
    fn kernel_of_surface_triple() {
        let spec = TrinomialSpec::type2(vec![2], vec![3], vec![5]).unwrap();
        let basis = kernel_basis(&spec);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], big(&[15, 10, 6]));
    }

    #[test]
    fn kernel_rank_zero_for_tiny_type1() {
        let spec = TrinomialSpec::type1(vec![1], vec![1]).unwrap();
        assert!(kernel_basis(&spec).is_empty());
        let spec = TrinomialSpec::type1(vec![2], vec![2]).unwrap();
        assert!(kernel_basis(&spec).is_empty());
    }

    #[test]
    fn kernel_vectors_satisfy_relations() {
        let spec = TrinomialSpec::type2(vec![2, 2], vec![3, 5], vec![7]).unwrap();
        let basis = kernel_basis(&spec);
        assert_eq!(basis.len(), spec.n() - 2);
        for v in &basis {
            let s0 = &v[0] * 2 + &v[1] * 2;
            let s1 = &v[2] * 3 + &v[3] * 5;
            let s2 = &v[4] * 7;
            assert_eq!(s0, s1);
            assert_eq!(s1, s2);
        }
    }

    #[test]
    fn semigroup_examples() {
        assert_eq!(represent_in_semigroup(10, &[2, 4]).unwrap(), vec![1, 2]);
        assert_eq!(represent_in_semigroup(42, &[6]).unwrap(), vec![7]);
        assert_eq!(represent_in_semigroup(3, &[2, 4]).unwrap_err(), Error::NotRepresentable);
    }

    #[test]
    fn semigroup_output_is_lex_min_and_exact() {
        let gens = [3u64, 5, 7];
        for target in 15..60u64 {
            if let Ok(b) = represent_in_semigroup(target, &gens) {
                assert!(b.iter().all(|&x| x >= 1));
                assert_eq!(b.iter().zip(&gens).map(|(x, g)| x * g).sum::<u64>(), target);
                // brute-force lexicographic minimum
                let mut best: Option<Vec<u64>> = None;
                for b1 in 1..=target / 3 {
                    for b2 in 1..=target / 5 {
                        for b3 in 1..=target / 7 {
                            if b1 * 3 + b2 * 5 + b3 * 7 == target {
                                let cand = vec![b1, b2, b3];
                                if best.as_ref().map_or(true, |b| &cand < b) {
                                    best = Some(cand);
                                }
                            }
                        }
                    }
                }
                assert_eq!(Some(b), best);
            }
        }
    }
}
