//! The Lie superalgebra `W(m|n)` of continuous super derivations of
//! `O_m<n>`: fields `sum P_i d/dx_i + sum Q_j d/dxi_j` with the super
//! bracket and the super divergence.

use crate::context::Context;
use crate::error::AlgError;
use crate::monomial::SuperMonomial;
use crate::poly::{SuperPolynomial, TermParity};
use crate::scalar::Scalar;
use num::Signed;
use std::ops::{Add, Neg, Sub};

/// A coefficient slot of a vector field: `d/dx_i` or `d/dxi_j` (1-based).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    X(usize),
    Xi(usize),
}

impl Gen {
    /// Parity of the derivation `d/du` (0 for x, 1 for xi).
    pub fn parity(&self) -> u32 {
        match self {
            Gen::X(_) => 0,
            Gen::Xi(_) => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperVectorField {
    ctx: Context,
    px: Vec<SuperPolynomial>,
    qxi: Vec<SuperPolynomial>,
}

impl SuperVectorField {
    pub fn zero(ctx: Context) -> Self {
        SuperVectorField {
            ctx,
            px: vec![SuperPolynomial::zero(ctx); ctx.num_x()],
            qxi: vec![SuperPolynomial::zero(ctx); ctx.num_xi()],
        }
    }

    /// `d/dx_i` (1-based).
    pub fn ddx(ctx: Context, i: usize) -> Result<Self, AlgError> {
        if i == 0 || i > ctx.num_x() {
            return Err(AlgError::IndexOutOfRange(format!("d/dx{i}")));
        }
        let mut f = Self::zero(ctx);
        f.px[i - 1] = SuperPolynomial::one(ctx);
        Ok(f)
    }

    /// `d/dxi_j` (1-based).
    pub fn ddxi(ctx: Context, j: usize) -> Result<Self, AlgError> {
        if j == 0 || j > ctx.num_xi() {
            return Err(AlgError::IndexOutOfRange(format!("d/dxi{j}")));
        }
        let mut f = Self::zero(ctx);
        f.qxi[j - 1] = SuperPolynomial::one(ctx);
        Ok(f)
    }

    /// `coeff * d/du` for a monomial coefficient.
    pub fn monomial_field(
        ctx: Context,
        mono: SuperMonomial,
        coeff: Scalar,
        gen: Gen,
    ) -> Result<Self, AlgError> {
        let mut f = Self::zero(ctx);
        let p = SuperPolynomial::from_monomial(ctx, mono, coeff);
        match gen {
            Gen::X(i) => {
                if i == 0 || i > ctx.num_x() {
                    return Err(AlgError::IndexOutOfRange(format!("d/dx{i}")));
                }
                f.px[i - 1] = p;
            }
            Gen::Xi(j) => {
                if j == 0 || j > ctx.num_xi() {
                    return Err(AlgError::IndexOutOfRange(format!("d/dxi{j}")));
                }
                f.qxi[j - 1] = p;
            }
        }
        Ok(f)
    }

    pub fn from_parts(
        ctx: Context,
        px: Vec<SuperPolynomial>,
        qxi: Vec<SuperPolynomial>,
    ) -> Result<Self, AlgError> {
        if px.len() != ctx.num_x() || qxi.len() != ctx.num_xi() {
            return Err(AlgError::ContextMismatch(
                "coefficient counts do not match the context".into(),
            ));
        }
        for p in px.iter().chain(qxi.iter()) {
            p.context().same_as(&ctx)?;
        }
        Ok(SuperVectorField { ctx, px, qxi })
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn xcoef(&self, i: usize) -> &SuperPolynomial {
        &self.px[i - 1]
    }

    pub fn xicoef(&self, j: usize) -> &SuperPolynomial {
        &self.qxi[j - 1]
    }

    pub fn coef(&self, g: Gen) -> &SuperPolynomial {
        match g {
            Gen::X(i) => self.xcoef(i),
            Gen::Xi(j) => self.xicoef(j),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.px.iter().all(|p| p.is_zero()) && self.qxi.iter().all(|p| p.is_zero())
    }

    pub fn is_exact(&self) -> bool {
        self.px.iter().all(|p| p.is_exact()) && self.qxi.iter().all(|p| p.is_exact())
    }

    pub fn max_xdeg(&self) -> Option<i64> {
        self.px
            .iter()
            .chain(self.qxi.iter())
            .filter_map(|p| p.max_xdeg())
            .max()
    }

    /// Parity of the field: a field is homogeneous of parity `p` iff
    /// every `P_i` has parity `p` and every `Q_j` has parity `p + 1`.
    pub fn parity(&self) -> TermParity {
        let mut seen = [false, false];
        for (i, p) in self.px.iter().enumerate() {
            let _ = i;
            match p.parity() {
                TermParity::Even if !p.is_zero() => seen[0] = true,
                TermParity::Odd => seen[1] = true,
                TermParity::Mixed => return TermParity::Mixed,
                _ => {}
            }
        }
        for q in &self.qxi {
            match q.parity() {
                TermParity::Even if !q.is_zero() => seen[1] = true,
                TermParity::Odd => seen[0] = true,
                TermParity::Mixed => return TermParity::Mixed,
                _ => {}
            }
        }
        match seen {
            [true, true] => TermParity::Mixed,
            [false, true] => TermParity::Odd,
            _ => TermParity::Even,
        }
    }

    /// The homogeneous part of parity `p` (0 or 1).
    pub fn parity_part(&self, p: u32) -> Self {
        SuperVectorField {
            ctx: self.ctx,
            px: self.px.iter().map(|c| c.parity_part(p)).collect(),
            qxi: self.qxi.iter().map(|c| c.parity_part(p ^ 1)).collect(),
        }
    }

    /// Apply as a derivation: `X(f) = sum P_i df/dx_i + sum Q_j df/dxi_j`.
    pub fn apply(&self, f: &SuperPolynomial) -> Result<SuperPolynomial, AlgError> {
        self.ctx.same_as(f.context())?;
        let mut out = SuperPolynomial::zero(self.ctx);
        for (i, p) in self.px.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            out = out.try_add(&p.try_mul(&f.partial_x(i + 1)?)?)?;
        }
        for (j, q) in self.qxi.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            out = out.try_add(&q.try_mul(&f.partial_xi(j + 1)?)?)?;
        }
        Ok(out)
    }

    /// Super bracket `[X, Y] = XY - (-1)^{p(X)p(Y)} YX`, computed on
    /// coefficients. Mixed-parity inputs are split into homogeneous parts
    /// and recombined.
    pub fn bracket(&self, other: &Self) -> Result<Self, AlgError> {
        self.ctx.same_as(&other.ctx)?;
        let mut out = Self::zero(self.ctx);
        for pa in 0..2u32 {
            let a = self.parity_part(pa);
            if a.is_zero() {
                continue;
            }
            for pb in 0..2u32 {
                let b = other.parity_part(pb);
                if b.is_zero() {
                    continue;
                }
                out = &out + &a.bracket_homogeneous(&b, pa, pb)?;
            }
        }
        Ok(out)
    }

    fn bracket_homogeneous(&self, other: &Self, pa: u32, pb: u32) -> Result<Self, AlgError> {
        let sign_flip = pa * pb % 2 == 1;
        let comb = |xc: &SuperPolynomial, yc: &SuperPolynomial| -> Result<SuperPolynomial, AlgError> {
            let first = self.apply(yc)?;
            let second = other.apply(xc)?;
            if sign_flip {
                first.try_add(&second)
            } else {
                first.try_sub(&second)
            }
        };
        let mut px = Vec::with_capacity(self.px.len());
        for i in 0..self.px.len() {
            px.push(comb(&self.px[i], &other.px[i])?);
        }
        let mut qxi = Vec::with_capacity(self.qxi.len());
        for j in 0..self.qxi.len() {
            qxi.push(comb(&self.qxi[j], &other.qxi[j])?);
        }
        Ok(SuperVectorField {
            ctx: self.ctx,
            px,
            qxi,
        })
    }

    /// Super divergence
    /// `div X = sum dP_i/dx_i + sum (-1)^{p(Q_j)} dQ_j/dxi_j`,
    /// the sign applied per homogeneous part of each `Q_j`.
    pub fn divergence(&self) -> Result<SuperPolynomial, AlgError> {
        let mut out = SuperPolynomial::zero(self.ctx);
        for (i, p) in self.px.iter().enumerate() {
            out = out.try_add(&p.partial_x(i + 1)?)?;
        }
        for (j, q) in self.qxi.iter().enumerate() {
            let even = q.parity_part(0);
            let odd = q.parity_part(1);
            out = out.try_add(&even.partial_xi(j + 1)?)?;
            out = out.try_sub(&odd.partial_xi(j + 1)?)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        SuperVectorField {
            ctx: self.ctx,
            px: self.px.iter().map(|p| p.scale(c)).collect(),
            qxi: self.qxi.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiply every coefficient by a function on the left.
    pub fn mul_fn(&self, f: &SuperPolynomial) -> Result<Self, AlgError> {
        self.ctx.same_as(f.context())?;
        Ok(SuperVectorField {
            ctx: self.ctx,
            px: self
                .px
                .iter()
                .map(|p| f.try_mul(p))
                .collect::<Result<_, _>>()?,
            qxi: self
                .qxi
                .iter()
                .map(|p| f.try_mul(p))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Reinterpret in a compatible context (explicit, validated).
    pub fn into_context(&self, ctx: Context) -> Result<Self, AlgError> {
        Ok(SuperVectorField {
            ctx,
            px: self
                .px
                .iter()
                .map(|p| p.into_context(ctx))
                .collect::<Result<_, _>>()?,
            qxi: self
                .qxi
                .iter()
                .map(|p| p.into_context(ctx))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Iterate the nonzero coefficient slots in canonical order.
    pub fn slots(&self) -> impl Iterator<Item = (Gen, &SuperPolynomial)> {
        self.px
            .iter()
            .enumerate()
            .map(|(i, p)| (Gen::X(i + 1), p))
            .chain(
                self.qxi
                    .iter()
                    .enumerate()
                    .map(|(j, q)| (Gen::Xi(j + 1), q)),
            )
            .filter(|(_, p)| !p.is_zero())
    }

    /// Parse `x1^2 d/dx1 + xi1 xi2 d/dxi2` style text.
    pub fn parse(ctx: Context, input: &str) -> Result<Self, AlgError> {
        parse_field(ctx, input)
    }
}

impl Add for &SuperVectorField {
    type Output = SuperVectorField;
    fn add(self, rhs: &SuperVectorField) -> SuperVectorField {
        self.ctx.same_as(&rhs.ctx).expect("context mismatch in +");
        SuperVectorField {
            ctx: self.ctx,
            px: self
                .px
                .iter()
                .zip(&rhs.px)
                .map(|(a, b)| a + b)
                .collect(),
            qxi: self
                .qxi
                .iter()
                .zip(&rhs.qxi)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &SuperVectorField {
    type Output = SuperVectorField;
    fn sub(self, rhs: &SuperVectorField) -> SuperVectorField {
        self + &-rhs
    }
}

impl Neg for &SuperVectorField {
    type Output = SuperVectorField;
    fn neg(self) -> SuperVectorField {
        SuperVectorField {
            ctx: self.ctx,
            px: self.px.iter().map(|p| -p).collect(),
            qxi: self.qxi.iter().map(|p| -p).collect(),
        }
    }
}

impl std::fmt::Display for SuperVectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (gen, coeff) in self.slots() {
            let gen_str = match gen {
                Gen::X(i) => format!("d/dx{i}"),
                Gen::Xi(j) => format!("d/dxi{j}"),
            };
            for (m, c) in coeff.terms() {
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
                let mono = SuperPolynomial::from_monomial(self.ctx, m.clone(), abs.clone());
                if m.is_one() && num::One::is_one(&abs) {
                    write!(f, "{gen_str}")?;
                } else {
                    write!(f, "{mono} {gen_str}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn parse_field(ctx: Context, input: &str) -> Result<SuperVectorField, AlgError> {
    let mut out = SuperVectorField::zero(ctx);
    // split into summands on +/- at top level
    let mut terms: Vec<(i64, String)> = Vec::new();
    let mut sign = 1i64;
    let mut cur = String::new();
    let mut last_meaningful = ' ';
    for ch in input.chars() {
        match ch {
            // a sign right after '^' belongs to a (Laurent) exponent
            '+' | '-' if last_meaningful != '^' => {
                if !cur.trim().is_empty() {
                    terms.push((sign, cur.clone()));
                    cur.clear();
                }
                sign = if ch == '-' { -1 } else { 1 };
            }
            _ => cur.push(ch),
        }
        if !ch.is_whitespace() {
            last_meaningful = ch;
        }
    }
    if !cur.trim().is_empty() {
        terms.push((sign, cur));
    }
    if terms.is_empty() {
        return Err(AlgError::Parse("empty vector field".into()));
    }
    for (sgn, term) in terms {
        let term = term.trim();
        let Some(pos) = term.find("d/d") else {
            return Err(AlgError::Parse(format!("missing d/d in `{term}`")));
        };
        let (coeff_str, gen_str) = term.split_at(pos);
        let gen_str = gen_str[3..].trim();
        let gen = if let Some(j) = gen_str.strip_prefix("xi") {
            Gen::Xi(j
                .trim()
                .parse::<usize>()
                .map_err(|_| AlgError::Parse(format!("bad generator `{gen_str}`")))?)
        } else if let Some(i) = gen_str.strip_prefix('x') {
            Gen::X(i
                .trim()
                .parse::<usize>()
                .map_err(|_| AlgError::Parse(format!("bad generator `{gen_str}`")))?)
        } else {
            return Err(AlgError::Parse(format!("bad generator `{gen_str}`")));
        };
        let coeff = if coeff_str.trim().is_empty() {
            SuperPolynomial::one(ctx)
        } else {
            SuperPolynomial::parse(ctx, coeff_str.trim())?
        };
        let coeff = if sgn < 0 { -&coeff } else { coeff };
        let single = SuperVectorField::from_coeff(ctx, coeff, gen)?;
        out = &out + &single;
    }
    Ok(out)
}

impl SuperVectorField {
    fn from_coeff(ctx: Context, coeff: SuperPolynomial, gen: Gen) -> Result<Self, AlgError> {
        let mut f = Self::zero(ctx);
        match gen {
            Gen::X(i) => {
                if i == 0 || i > ctx.num_x() {
                    return Err(AlgError::IndexOutOfRange(format!("d/dx{i}")));
                }
                f.px[i - 1] = coeff;
            }
            Gen::Xi(j) => {
                if j == 0 || j > ctx.num_xi() {
                    return Err(AlgError::IndexOutOfRange(format!("d/dxi{j}")));
                }
                f.qxi[j - 1] = coeff;
            }
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn ctx() -> Context {
        Context::jet(2, 2, 4)
    }

    #[test]
    fn apply_examples() {
        let c = ctx();
        let ddx1 = SuperVectorField::ddx(c, 1).unwrap();
        let x1sq = SuperPolynomial::parse(c, "x1^2").unwrap();
        assert_eq!(
            ddx1.apply(&x1sq).unwrap(),
            SuperPolynomial::parse(c, "2 x1").unwrap()
        );

        let sub = SuperVectorField::parse(c, "xi1 d/dxi2").unwrap();
        assert_eq!(
            sub.apply(&SuperPolynomial::xi(c, 2).unwrap()).unwrap(),
            SuperPolynomial::xi(c, 1).unwrap()
        );

        let euler_x = SuperVectorField::parse(c, "x1 d/dx1").unwrap();
        let f = SuperPolynomial::parse(c, "x1 xi1").unwrap();
        assert_eq!(euler_x.apply(&f).unwrap(), f);
    }

    #[test]
    fn witt_relation() {
        let c = Context::jet(1, 0, 3);
        let e = SuperVectorField::parse(c, "x1 d/dx1").unwrap();
        let d = SuperVectorField::ddx(c, 1).unwrap();
        assert_eq!(e.bracket(&d).unwrap(), -&d);
    }

    #[test]
    fn gl_relation_in_odd_variables() {
        let c = Context::jet(0, 2, 0);
        let a = SuperVectorField::parse(c, "xi1 d/dxi2").unwrap();
        let b = SuperVectorField::parse(c, "xi2 d/dxi1").unwrap();
        let expect = SuperVectorField::parse(c, "xi1 d/dxi1 - xi2 d/dxi2").unwrap();
        assert_eq!(a.bracket(&b).unwrap(), expect);
    }

    #[test]
    fn odd_odd_bracket_is_anticommutator() {
        let c = Context::jet(0, 2, 0);
        let d1 = SuperVectorField::ddxi(c, 1).unwrap();
        assert!(d1.bracket(&d1).unwrap().is_zero());
        // [d/dxi1, xi1 d/dxi1] has anticommutator d/dxi1
        let f = SuperVectorField::parse(c, "xi1 d/dxi1").unwrap();
        assert_eq!(d1.bracket(&f).unwrap(), d1);
    }

    #[test]
    fn divergence_examples() {
        let c = Context::jet(1, 1, 3);
        let e = SuperVectorField::parse(c, "x1 d/dx1").unwrap();
        assert_eq!(e.divergence().unwrap(), SuperPolynomial::one(c));

        let euler = SuperVectorField::parse(c, "x1 d/dx1 + xi1 d/dxi1").unwrap();
        assert!(euler.divergence().unwrap().is_zero());

        let dxi = SuperVectorField::ddxi(c, 1).unwrap();
        assert!(dxi.divergence().unwrap().is_zero());
    }

    #[test]
    fn field_parity() {
        let c = ctx();
        let even = SuperVectorField::parse(c, "x1 d/dx1 + xi1 d/dxi1").unwrap();
        assert_eq!(even.parity(), TermParity::Even);
        let odd = SuperVectorField::parse(c, "xi1 d/dx1 + x2 d/dxi2").unwrap();
        assert_eq!(odd.parity(), TermParity::Odd);
        let mixed = SuperVectorField::parse(c, "x1 d/dx1 + x2 d/dxi2").unwrap();
        assert_eq!(mixed.parity(), TermParity::Mixed);
    }

    #[test]
    fn display_round_trip() {
        let c = ctx();
        let f =
            SuperVectorField::parse(c, "x1^2 d/dx1 + xi1 xi2 d/dxi2 - 3/2 x2 d/dxi1").unwrap();
        let s = f.to_string();
        assert_eq!(SuperVectorField::parse(c, &s).unwrap(), f);
    }

    #[test]
    fn scale_and_zero() {
        let c = ctx();
        let f = SuperVectorField::parse(c, "x1 d/dx1").unwrap();
        assert!(f.scale(&qi(0)).is_zero());
    }
}
