//! Monomials `x^a xi_S` in the supercommutative ring.
//!
//! The xi factors of a monomial are kept as a bitmask, which encodes the
//! canonical ascending-index order once and for all; every sign in the
//! crate comes from counting the inversions needed to restore that order.

use crate::context::Context;
use crate::error::AlgError;
use std::cmp::Ordering;

/// A monomial: x-exponent vector plus a set of xi indices.
///
/// Bit `j` of `ximask` (0-based) stands for `xi_{j+1}`. Parity is the
/// number of xi factors mod 2.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SuperMonomial {
    pub xexp: Vec<i32>,
    pub ximask: u32,
}

impl SuperMonomial {
    pub fn one(num_x: usize) -> Self {
        SuperMonomial {
            xexp: vec![0; num_x],
            ximask: 0,
        }
    }

    /// `x_i` (1-based).
    pub fn x(num_x: usize, i: usize) -> Self {
        assert!(1 <= i && i <= num_x);
        let mut xexp = vec![0; num_x];
        xexp[i - 1] = 1;
        SuperMonomial { xexp, ximask: 0 }
    }

    /// `xi_j` (1-based).
    pub fn xi(num_x: usize, j: usize) -> Self {
        SuperMonomial {
            xexp: vec![0; num_x],
            ximask: 1 << (j - 1),
        }
    }

    pub fn xdegree(&self) -> i64 {
        self.xexp.iter().map(|&e| e as i64).sum()
    }

    pub fn xi_count(&self) -> u32 {
        self.ximask.count_ones()
    }

    /// Total degree with every indeterminate weighted 1.
    pub fn total_degree(&self) -> i64 {
        self.xdegree() + self.xi_count() as i64
    }

    pub fn parity(&self) -> u32 {
        self.ximask.count_ones() & 1
    }

    pub fn is_one(&self) -> bool {
        self.ximask == 0 && self.xexp.iter().all(|&e| e == 0)
    }

    /// Ascending list of xi indices (1-based).
    pub fn xi_indices(&self) -> Vec<usize> {
        mask_indices(self.ximask)
    }

    /// Weighted degree under per-variable weights (`wx` for x, `wxi` for xi).
    pub fn weighted_degree(&self, wx: &[i64], wxi: &[i64]) -> i64 {
        let mut d: i64 = self
            .xexp
            .iter()
            .zip(wx)
            .map(|(&e, &w)| e as i64 * w)
            .sum();
        for j in mask_indices(self.ximask) {
            d += wxi[j - 1];
        }
        d
    }
}

/// Graded-lex on the x-exponents, then the xi mask compared as an
/// ascending integer list. This is the printing order of the crate.
impl Ord for SuperMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.xdegree()
            .cmp(&other.xdegree())
            .then_with(|| self.xexp.cmp(&other.xexp))
            .then_with(|| cmp_mask_as_list(self.ximask, other.ximask))
    }
}

impl PartialOrd for SuperMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compare two bitmasks as ascending index lists ([1,3] < [2], [1] < [1,3]).
pub fn cmp_mask_as_list(a: u32, b: u32) -> Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            (false, false) => {
                let (i, j) = (a.trailing_zeros(), b.trailing_zeros());
                match i.cmp(&j) {
                    Ordering::Equal => {
                        a &= a - 1;
                        b &= b - 1;
                    }
                    ord => return ord,
                }
            }
        }
    }
}

pub fn mask_indices(mask: u32) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        v.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    v
}

/// Merge two sets of odd generators written in ascending order.
///
/// Returns `None` when the sets intersect (an odd generator squares to
/// zero), otherwise the Koszul sign `(-1)^inv` where `inv` counts the
/// transpositions needed to interleave `b`'s indices past `a`'s.
pub fn odd_merge(a: u32, b: u32) -> Option<(i32, u32)> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut m = b;
    while m != 0 {
        let j = m.trailing_zeros();
        // a-indices strictly above j must be jumped over
        inversions += (a >> (j + 1)).count_ones();
        m &= m - 1;
    }
    Some((if inversions % 2 == 0 { 1 } else { -1 }, a | b))
}

/// Outcome of a monomial product inside a context.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MonoProduct {
    /// A repeated odd factor: exactly zero.
    Zero,
    /// The product exceeded the jet truncation and was dropped.
    Truncated,
    Product(i32, SuperMonomial),
}

/// Multiply two monomials in `ctx`. Zero iff the xi masks intersect;
/// truncated iff the merged x-degree exceeds the jet bound.
pub fn mono_mul(
    ctx: &Context,
    a: &SuperMonomial,
    b: &SuperMonomial,
) -> Result<MonoProduct, AlgError> {
    if a.xexp.len() != ctx.num_x() || b.xexp.len() != ctx.num_x() {
        return Err(AlgError::ContextMismatch(
            "monomial arity does not match context".into(),
        ));
    }
    let merged = match odd_merge(a.ximask, b.ximask) {
        None => return Ok(MonoProduct::Zero),
        Some(sm) => sm,
    };
    let xexp: Vec<i32> = a.xexp.iter().zip(&b.xexp).map(|(p, q)| p + q).collect();
    if !ctx.admits(&xexp) {
        return Ok(MonoProduct::Truncated);
    }
    Ok(MonoProduct::Product(merged.0, SuperMonomial { xexp, ximask: merged.1 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_xi_product_has_no_inversions() {
        let ctx = Context::jet(0, 2, 0);
        let a = SuperMonomial::xi(0, 1);
        let b = SuperMonomial::xi(0, 2);
        match mono_mul(&ctx, &a, &b).unwrap() {
            MonoProduct::Product(s, m) => {
                assert_eq!(s, 1);
                assert_eq!(m.ximask, 0b11);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn transposed_xi_product_picks_up_a_sign() {
        let ctx = Context::jet(0, 2, 0);
        let a = SuperMonomial::xi(0, 2);
        let b = SuperMonomial::xi(0, 1);
        match mono_mul(&ctx, &a, &b).unwrap() {
            MonoProduct::Product(s, m) => {
                assert_eq!(s, -1);
                assert_eq!(m.ximask, 0b11);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn repeated_odd_factor_is_zero() {
        let ctx = Context::jet(0, 1, 0);
        let a = SuperMonomial::xi(0, 1);
        assert_eq!(mono_mul(&ctx, &a, &a).unwrap(), MonoProduct::Zero);
    }

    #[test]
    fn truncation_drops_high_degree() {
        let ctx = Context::jet(1, 0, 1);
        let x = SuperMonomial::x(1, 1);
        assert_eq!(mono_mul(&ctx, &x, &x).unwrap(), MonoProduct::Truncated);
    }

    #[test]
    fn mask_list_order() {
        // {1,3} < {2}, {1} < {1,3}
        assert_eq!(cmp_mask_as_list(0b101, 0b010), Ordering::Less);
        assert_eq!(cmp_mask_as_list(0b001, 0b101), Ordering::Less);
        assert_eq!(cmp_mask_as_list(0b110, 0b110), Ordering::Equal);
    }

    #[test]
    fn odd_merge_inversion_count() {
        // xi3 * xi1 xi2: xi1 and xi2 each pass xi3 -> sign +1? No:
        // b = {1,2}, a = {3}: moving 1 past 3 (one inversion), 2 past 3
        // (another) -> even -> +1.
        assert_eq!(odd_merge(0b100, 0b011), Some((1, 0b111)));
        // a = {2}, b = {1}: one inversion -> -1.
        assert_eq!(odd_merge(0b10, 0b01), Some((-1, 0b11)));
        assert_eq!(odd_merge(0b1, 0b1), None);
    }
}
