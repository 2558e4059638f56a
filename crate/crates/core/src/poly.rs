//! The truncated supercommutative ring `O_m<n>` and its Laurent variant.

use crate::context::Context;
use crate::error::AlgError;
use crate::monomial::{mask_indices, mono_mul, MonoProduct, SuperMonomial};
use crate::scalar::{qi, Scalar};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Parity classification of a polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TermParity {
    Even,
    Odd,
    Mixed,
}

/// A polynomial with exact rational coefficients over a [`Context`].
///
/// No zero coefficients are stored and no term exceeds the context's
/// truncation. The `lossy` flag records whether some arithmetic along the
/// way dropped an out-of-window term, i.e. whether this value is only a
/// jet class rather than the exact polynomial result; identity checks use
/// it to refuse verdicts the truncation cannot support.
#[derive(Clone, Debug)]
pub struct SuperPolynomial {
    ctx: Context,
    terms: BTreeMap<SuperMonomial, Scalar>,
    lossy: bool,
}

impl PartialEq for SuperPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.terms == other.terms
    }
}
impl Eq for SuperPolynomial {}

impl SuperPolynomial {
    pub fn zero(ctx: Context) -> Self {
        SuperPolynomial {
            ctx,
            terms: BTreeMap::new(),
            lossy: false,
        }
    }

    pub fn one(ctx: Context) -> Self {
        Self::constant(ctx, qi(1))
    }

    pub fn constant(ctx: Context, c: Scalar) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(SuperMonomial::one(ctx.num_x()), c);
        }
        p
    }

    /// `x_i` (1-based).
    pub fn x(ctx: Context, i: usize) -> Result<Self, AlgError> {
        if i == 0 || i > ctx.num_x() {
            return Err(AlgError::IndexOutOfRange(format!("x{i}")));
        }
        Ok(Self::from_monomial(
            ctx,
            SuperMonomial::x(ctx.num_x(), i),
            qi(1),
        ))
    }

    /// `xi_j` (1-based).
    pub fn xi(ctx: Context, j: usize) -> Result<Self, AlgError> {
        if j == 0 || j > ctx.num_xi() {
            return Err(AlgError::IndexOutOfRange(format!("xi{j}")));
        }
        Ok(Self::from_monomial(
            ctx,
            SuperMonomial::xi(ctx.num_x(), j),
            qi(1),
        ))
    }

    pub fn from_monomial(ctx: Context, m: SuperMonomial, c: Scalar) -> Self {
        let mut p = Self::zero(ctx);
        p.add_term(m, c);
        p
    }

    /// Monomial `x^e` in a context with a single commuting indeterminate.
    pub fn x_pow(ctx: Context, e: i32) -> Self {
        assert_eq!(ctx.num_x(), 1, "x_pow needs exactly one x");
        assert!(ctx.is_laurent() || e >= 0);
        Self::from_monomial(
            ctx,
            SuperMonomial {
                xexp: vec![e],
                ximask: 0,
            },
            qi(1),
        )
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether the value is the exact result of the computation that
    /// produced it (no truncation drop happened anywhere upstream).
    pub fn is_exact(&self) -> bool {
        !self.lossy
    }

    pub(crate) fn mark_lossy(&mut self) {
        self.lossy = true;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SuperMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &SuperMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&SuperMonomial::one(self.ctx.num_x()))
    }

    /// Largest total x-degree among stored terms (None when zero).
    pub fn max_xdeg(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.xdegree()).max()
    }

    fn add_term(&mut self, m: SuperMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert!(self.ctx.admits(&m.xexp));
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, AlgError> {
        self.ctx.same_as(&rhs.ctx)?;
        let mut out = self.clone();
        out.lossy |= rhs.lossy;
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, AlgError> {
        self.try_add(&-rhs)
    }

    /// Product, with truncated terms dropped and recorded in the
    /// exactness flag.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self, AlgError> {
        self.ctx.same_as(&rhs.ctx)?;
        let mut out = Self::zero(self.ctx);
        out.lossy = self.lossy || rhs.lossy;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                match mono_mul(&self.ctx, ma, mb)? {
                    MonoProduct::Zero => {}
                    MonoProduct::Truncated => out.lossy = true,
                    MonoProduct::Product(s, m) => {
                        let mut c = ca * cb;
                        if s < 0 {
                            c = -c;
                        }
                        out.add_term(m, c);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            let mut z = Self::zero(self.ctx);
            z.lossy = self.lossy;
            return z;
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    /// Ordinary partial derivative in `x_i` (1-based). Even operator.
    pub fn partial_x(&self, i: usize) -> Result<Self, AlgError> {
        if i == 0 || i > self.ctx.num_x() {
            return Err(AlgError::IndexOutOfRange(format!("d/dx{i}")));
        }
        let mut out = Self::zero(self.ctx);
        out.lossy = self.lossy;
        for (m, c) in &self.terms {
            let e = m.xexp[i - 1];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.xexp[i - 1] = e - 1;
            out.add_term(m2, c * qi(e as i64));
        }
        Ok(out)
    }

    /// Left super derivative in `xi_j` (1-based): on a monomial with
    /// `xi_j` at ascending position `r` the sign is `(-1)^(r-1)`.
    pub fn partial_xi(&self, j: usize) -> Result<Self, AlgError> {
        if j == 0 || j > self.ctx.num_xi() {
            return Err(AlgError::IndexOutOfRange(format!("d/dxi{j}")));
        }
        let bit = 1u32 << (j - 1);
        let mut out = Self::zero(self.ctx);
        out.lossy = self.lossy;
        for (m, c) in &self.terms {
            if m.ximask & bit == 0 {
                continue;
            }
            let below = (m.ximask & (bit - 1)).count_ones();
            let mut m2 = m.clone();
            m2.ximask &= !bit;
            let mut coeff = c.clone();
            if below % 2 == 1 {
                coeff = -coeff;
            }
            out.add_term(m2, coeff);
        }
        Ok(out)
    }

    pub fn parity(&self) -> TermParity {
        let mut seen_even = false;
        let mut seen_odd = false;
        for m in self.terms.keys() {
            if m.parity() == 0 {
                seen_even = true;
            } else {
                seen_odd = true;
            }
        }
        match (seen_even, seen_odd) {
            (true, true) => TermParity::Mixed,
            (false, true) => TermParity::Odd,
            _ => TermParity::Even,
        }
    }

    /// The part of the given parity (0 even, 1 odd).
    pub fn parity_part(&self, p: u32) -> Self {
        let mut out = Self::zero(self.ctx);
        out.lossy = self.lossy;
        for (m, c) in &self.terms {
            if m.parity() == p {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Reinterpret in another context with the same indeterminates.
    /// Explicit and validated; fails if a term does not fit.
    pub fn into_context(&self, ctx: Context) -> Result<Self, AlgError> {
        if ctx.num_x() != self.ctx.num_x() || ctx.num_xi() != self.ctx.num_xi() {
            return Err(AlgError::ContextMismatch(
                "different indeterminate counts".into(),
            ));
        }
        let mut out = Self::zero(ctx);
        out.lossy = self.lossy;
        for (m, c) in &self.terms {
            if !ctx.admits(&m.xexp) {
                return Err(AlgError::ContextMismatch(format!(
                    "term {} does not fit the target context",
                    display_monomial(m)
                )));
            }
            out.terms.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Parse the textual form, e.g. `3/2 x1^2 x3 xi1 xi4 - xi2`.
    pub fn parse(ctx: Context, input: &str) -> Result<Self, AlgError> {
        parse_poly(ctx, input)
    }
}

impl Add for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.try_add(rhs).expect("context mismatch in +")
    }
}

impl Sub for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.try_sub(rhs).expect("context mismatch in -")
    }
}

impl Mul for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.try_mul(rhs).expect("context mismatch in *")
    }
}

impl Neg for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -&*v;
        }
        out
    }
}

fn display_monomial(m: &SuperMonomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.xexp.iter().enumerate() {
        if e == 1 {
            parts.push(format!("x{}", i + 1));
        } else if e != 0 {
            parts.push(format!("x{}^{}", i + 1, e));
        }
    }
    for j in mask_indices(m.ximask) {
        parts.push(format!("xi{j}"));
    }
    parts.join(" ")
}

impl std::fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = display_monomial(m);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs} {mono}")?;
            }
        }
        Ok(())
    }
}

// --- parsing ----------------------------------------------------------

struct Tokens<'a> {
    rest: &'a str,
}

impl<'a> Tokens<'a> {
    fn new(s: &'a str) -> Self {
        Tokens { rest: s.trim() }
    }

    fn peek(&self) -> Option<char> {
        self.rest.chars().next()
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.rest = &self.rest[c.len_utf8()..];
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let end = self
            .rest
            .char_indices()
            .find(|&(_, c)| !f(c))
            .map(|(i, _)| i)
            .unwrap_or(self.rest.len());
        let (head, tail) = self.rest.split_at(end);
        self.rest = tail;
        head
    }

    fn integer(&mut self) -> Result<i64, AlgError> {
        self.skip_ws();
        let neg = self.eat('-');
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(AlgError::Parse(format!("expected integer at `{}`", self.rest)));
        }
        let v: i64 = digits
            .parse()
            .map_err(|_| AlgError::Parse("integer overflow".into()))?;
        Ok(if neg { -v } else { v })
    }
}

/// Parses `[sign] [rational] factor*` terms joined by `+`/`-`.
fn parse_poly(ctx: Context, input: &str) -> Result<SuperPolynomial, AlgError> {
    let mut t = Tokens::new(input);
    let mut out = SuperPolynomial::zero(ctx);
    let mut sign = 1i64;
    t.skip_ws();
    if t.eat('-') {
        sign = -1;
    } else {
        let _ = t.eat('+');
    }
    loop {
        let (coeff, mono) = parse_term(ctx, &mut t)?;
        out.add_term(mono, coeff * qi(sign));
        t.skip_ws();
        if t.rest.is_empty() {
            break;
        }
        if t.eat('+') {
            sign = 1;
        } else if t.eat('-') {
            sign = -1;
        } else {
            return Err(AlgError::Parse(format!("unexpected input `{}`", t.rest)));
        }
    }
    Ok(out)
}

fn parse_term(
    ctx: Context,
    t: &mut Tokens,
) -> Result<(Scalar, SuperMonomial), AlgError> {
    t.skip_ws();
    let mut coeff = qi(1);
    let mut saw_anything = false;
    if t.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
        let n = t.integer()?;
        coeff = if t.eat('/') {
            let d = t.integer()?;
            if d == 0 {
                return Err(AlgError::Parse("zero denominator".into()));
            }
            crate::scalar::q(n, d)
        } else {
            qi(n)
        };
        saw_anything = true;
    }
    let mut mono = SuperMonomial::one(ctx.num_x());
    loop {
        t.skip_ws();
        if t.rest.starts_with("xi") {
            t.rest = &t.rest[2..];
            let j = t.integer()?;
            if j < 1 || j as usize > ctx.num_xi() {
                return Err(AlgError::IndexOutOfRange(format!("xi{j}")));
            }
            let bit = 1u32 << (j - 1);
            if mono.ximask & bit != 0 {
                return Err(AlgError::Parse(format!("repeated factor xi{j}")));
            }
            mono.ximask |= bit;
            saw_anything = true;
        } else if t.rest.starts_with('x') {
            t.rest = &t.rest[1..];
            let i = t.integer()?;
            if i < 1 || i as usize > ctx.num_x() {
                return Err(AlgError::IndexOutOfRange(format!("x{i}")));
            }
            let e = if t.eat('^') { t.integer()? } else { 1 };
            mono.xexp[i as usize - 1] += e as i32;
            saw_anything = true;
        } else {
            break;
        }
    }
    if !saw_anything {
        return Err(AlgError::Parse(format!("expected term at `{}`", t.rest)));
    }
    if !ctx.admits(&mono.xexp) {
        return Err(AlgError::Parse(format!(
            "monomial exceeds the context window: {}",
            display_monomial(&mono)
        )));
    }
    Ok((coeff, mono))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn ctx() -> Context {
        Context::jet(2, 2, 4)
    }

    #[test]
    fn product_with_cancellation() {
        // (x1 + xi1)(x1 - xi1) = x1^2 since xi1 xi1 = 0 and cross terms cancel
        let c = ctx();
        let x1 = SuperPolynomial::x(c, 1).unwrap();
        let xi1 = SuperPolynomial::xi(c, 1).unwrap();
        let p = &(&x1 + &xi1) * &(&x1 - &xi1);
        assert_eq!(p, &x1 * &x1);
        assert!(p.is_exact());
    }

    #[test]
    fn one_is_identity() {
        let c = ctx();
        let p = SuperPolynomial::parse(c, "3/2 x1^2 x2 xi1 - xi2").unwrap();
        assert_eq!(&SuperPolynomial::one(c) * &p, p);
    }

    #[test]
    fn repeated_odd_factor_kills_product() {
        let c = ctx();
        let a = SuperPolynomial::parse(c, "xi1 xi2").unwrap();
        let b = SuperPolynomial::xi(c, 2).unwrap();
        assert!((&a * &b).is_zero());
    }

    #[test]
    fn partial_x_power_rule() {
        let c = ctx();
        let p = SuperPolynomial::parse(c, "x1^2 xi1").unwrap();
        assert_eq!(
            p.partial_x(1).unwrap(),
            SuperPolynomial::parse(c, "2 x1 xi1").unwrap()
        );
        let q = SuperPolynomial::parse(c, "xi1 xi2").unwrap();
        assert!(q.partial_x(1).unwrap().is_zero());
        let r = SuperPolynomial::parse(c, "x1 x2").unwrap();
        assert_eq!(
            r.partial_x(2).unwrap(),
            SuperPolynomial::x(c, 1).unwrap()
        );
    }

    #[test]
    fn partial_xi_left_derivative_sign() {
        let c = ctx();
        let p = SuperPolynomial::parse(c, "xi1 xi2").unwrap();
        // xi2 sits at position 2: sign (-1)^1
        assert_eq!(
            p.partial_xi(2).unwrap(),
            SuperPolynomial::parse(c, "-xi1").unwrap()
        );
        assert_eq!(
            p.partial_xi(1).unwrap(),
            SuperPolynomial::xi(c, 2).unwrap()
        );
    }

    #[test]
    fn xi_derivatives_anticommute() {
        let c = ctx();
        for s in ["xi1 xi2", "x1 xi1 xi2", "xi1", "x2^2"] {
            let p = SuperPolynomial::parse(c, s).unwrap();
            let ab = p.partial_xi(2).unwrap().partial_xi(1).unwrap();
            let ba = p.partial_xi(1).unwrap().partial_xi(2).unwrap();
            assert!((&ab + &ba).is_zero(), "failed on {s}");
        }
    }

    #[test]
    fn parity_classification() {
        let c = ctx();
        assert_eq!(
            SuperPolynomial::parse(c, "x1 xi1 xi2").unwrap().parity(),
            TermParity::Even
        );
        assert_eq!(
            SuperPolynomial::xi(c, 1).unwrap().parity(),
            TermParity::Odd
        );
        assert_eq!(
            SuperPolynomial::parse(c, "x1 + xi1").unwrap().parity(),
            TermParity::Mixed
        );
    }

    #[test]
    fn truncation_is_flagged() {
        let c = Context::jet(1, 0, 2);
        let x = SuperPolynomial::x(c, 1).unwrap();
        let x2 = &x * &x;
        assert!(x2.is_exact());
        let x3 = &x2 * &x;
        assert!(x3.is_zero());
        assert!(!x3.is_exact());
    }

    #[test]
    fn cross_context_rejected() {
        let a = SuperPolynomial::one(Context::jet(1, 0, 2));
        let b = SuperPolynomial::one(Context::jet(1, 0, 3));
        assert!(matches!(
            a.try_mul(&b),
            Err(AlgError::ContextMismatch(_))
        ));
    }

    #[test]
    fn display_round_trip() {
        let c = ctx();
        let p = SuperPolynomial::parse(c, "3/2 x1^2 x2 xi1 xi2 - x1 + 2").unwrap();
        let s = p.to_string();
        assert_eq!(SuperPolynomial::parse(c, &s).unwrap(), p);
        assert_eq!(s, "2 - x1 + 3/2 x1^2 x2 xi1 xi2");
    }

    #[test]
    fn laurent_arithmetic_is_exact() {
        let c = Context::laurent(1, -2, 2);
        let xm2 = SuperPolynomial::x_pow(c, -2);
        let x2 = SuperPolynomial::x_pow(c, 2);
        let p = &xm2 * &x2;
        assert_eq!(p, SuperPolynomial::one(c));
        assert!(p.is_exact());
        // outside the declared window but still exact arithmetic
        let hi = &x2 * &x2;
        assert!(hi.is_exact());
        assert_eq!(hi, SuperPolynomial::x_pow(c, 4));
    }
}
