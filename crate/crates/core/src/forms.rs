//! The super differential-form algebra `Omega(m|n)`.
//!
//! Generators over `O_m<n>`: `dx_i` of parity 1 and `dxi_j` of parity 0,
//! with `dx_i dx_j = -dx_j dx_i`, `dx_i dxi_j = dxi_j dx_i` and
//! `dxi_i dxi_j = dxi_j dxi_i`. Powers of `dxi` survive, which is what
//! lets the symplectic form of `H(m|n)` carry its `(dxi_j)^2` terms.
//!
//! A term is kept in the canonical factor order `x^a xi_S dx_T dxi^g`;
//! every operation reorders into that form and accounts for the Koszul
//! signs of the moves it makes.

use crate::context::Context;
use crate::error::AlgError;
use crate::linalg::QMatrix;
use crate::monomial::{mask_indices, odd_merge, SuperMonomial};
use crate::poly::{SuperPolynomial, TermParity};
use crate::scalar::{qi, Scalar};
use crate::vf::SuperVectorField;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

/// Bound on the total dxi-degree of a stored term. Nothing in scope needs
/// powers beyond the square of a symplectic form.
pub const DXI_DEGREE_CAP: u32 = 4;

/// `base * dx_T * dxi^g` with the dx factors in ascending index order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FormMonomial {
    pub base: SuperMonomial,
    pub dxmask: u32,
    pub dxiexp: Vec<u8>,
}

impl FormMonomial {
    pub fn from_base(base: SuperMonomial, n: usize) -> Self {
        FormMonomial {
            base,
            dxmask: 0,
            dxiexp: vec![0; n],
        }
    }

    /// Form degree: number of dx factors plus total dxi exponent.
    pub fn form_degree(&self) -> u32 {
        self.dxmask.count_ones() + self.dxi_degree()
    }

    pub fn dxi_degree(&self) -> u32 {
        self.dxiexp.iter().map(|&e| e as u32).sum()
    }

    /// Parity: xi factors of the base plus dx factors, mod 2.
    pub fn parity(&self) -> u32 {
        (self.base.parity() + self.dxmask.count_ones()) & 1
    }
}

impl Ord for FormMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.form_degree()
            .cmp(&other.form_degree())
            .then_with(|| self.base.cmp(&other.base))
            .then_with(|| crate::monomial::cmp_mask_as_list(self.dxmask, other.dxmask))
            .then_with(|| self.dxiexp.cmp(&other.dxiexp))
    }
}

impl PartialOrd for FormMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct DifferentialForm {
    ctx: Context,
    terms: BTreeMap<FormMonomial, Scalar>,
    lossy: bool,
}

impl PartialEq for DifferentialForm {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.terms == other.terms
    }
}
impl Eq for DifferentialForm {}

/// Twist parameter for the `X -> L_X + lambda div X` module structure on
/// k-forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSpec {
    pub lambda: Scalar,
    pub k: u32,
}

impl DifferentialForm {
    pub fn zero(ctx: Context) -> Self {
        assert!(!ctx.is_laurent(), "forms live over jet contexts");
        DifferentialForm {
            ctx,
            terms: BTreeMap::new(),
            lossy: false,
        }
    }

    pub fn from_poly(f: &SuperPolynomial) -> Self {
        let ctx = *f.context();
        let mut out = Self::zero(ctx);
        out.lossy = !f.is_exact();
        for (m, c) in f.terms() {
            out.terms
                .insert(FormMonomial::from_base(m.clone(), ctx.num_xi()), c.clone());
        }
        out
    }

    /// `dx_i` (1-based).
    pub fn dx(ctx: Context, i: usize) -> Result<Self, AlgError> {
        if i == 0 || i > ctx.num_x() {
            return Err(AlgError::IndexOutOfRange(format!("dx{i}")));
        }
        let mut out = Self::zero(ctx);
        let mono = FormMonomial {
            base: SuperMonomial::one(ctx.num_x()),
            dxmask: 1 << (i - 1),
            dxiexp: vec![0; ctx.num_xi()],
        };
        out.terms.insert(mono, qi(1));
        Ok(out)
    }

    /// `dxi_j` (1-based).
    pub fn dxi(ctx: Context, j: usize) -> Result<Self, AlgError> {
        if j == 0 || j > ctx.num_xi() {
            return Err(AlgError::IndexOutOfRange(format!("dxi{j}")));
        }
        let mut out = Self::zero(ctx);
        let mut dxiexp = vec![0; ctx.num_xi()];
        dxiexp[j - 1] = 1;
        let mono = FormMonomial {
            base: SuperMonomial::one(ctx.num_x()),
            dxmask: 0,
            dxiexp,
        };
        out.terms.insert(mono, qi(1));
        Ok(out)
    }

    pub fn from_terms(
        ctx: Context,
        terms: impl IntoIterator<Item = (FormMonomial, Scalar)>,
    ) -> Self {
        let mut out = Self::zero(ctx);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        !self.lossy
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &FormMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    fn add_term(&mut self, m: FormMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        if !self.ctx.admits(&m.base.xexp) || m.dxi_degree() > DXI_DEGREE_CAP {
            self.lossy = true;
            return;
        }
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

    /// Parity classification over all terms.
    pub fn parity(&self) -> TermParity {
        let mut seen = [false, false];
        for m in self.terms.keys() {
            seen[m.parity() as usize] = true;
        }
        match seen {
            [true, true] => TermParity::Mixed,
            [false, true] => TermParity::Odd,
            _ => TermParity::Even,
        }
    }

    /// Common form degree of the terms, `None` for 0 or inhomogeneous.
    pub fn form_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.form_degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
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

    /// Product in `Omega(m|n)`.
    pub fn wedge(&self, rhs: &Self) -> Result<Self, AlgError> {
        self.ctx.same_as(&rhs.ctx)?;
        let mut out = Self::zero(self.ctx);
        out.lossy = self.lossy || rhs.lossy;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                // move the base of b left past the dx block of a
                let mut sgn = if (mb.base.parity() * ma.dxmask.count_ones()) % 2 == 1 {
                    -1i32
                } else {
                    1
                };
                let base = match crate::monomial::mono_mul(&self.ctx, &ma.base, &mb.base)? {
                    crate::monomial::MonoProduct::Zero => continue,
                    crate::monomial::MonoProduct::Truncated => {
                        out.lossy = true;
                        continue;
                    }
                    crate::monomial::MonoProduct::Product(s, m) => {
                        sgn *= s;
                        m
                    }
                };
                let Some((s2, dxmask)) = odd_merge(ma.dxmask, mb.dxmask) else {
                    continue;
                };
                sgn *= s2;
                let dxiexp: Vec<u8> = ma
                    .dxiexp
                    .iter()
                    .zip(&mb.dxiexp)
                    .map(|(a, b)| a + b)
                    .collect();
                let mut c = ca * cb;
                if sgn < 0 {
                    c = -c;
                }
                out.add_term(
                    FormMonomial {
                        base,
                        dxmask,
                        dxiexp,
                    },
                    c,
                );
            }
        }
        Ok(out)
    }

    /// Left multiplication by a function.
    pub fn mul_poly(&self, f: &SuperPolynomial) -> Result<Self, AlgError> {
        DifferentialForm::from_poly(f).wedge(self)
    }

    /// Exterior derivative: the parity-1 derivation with `d(x_i) = dx_i`,
    /// `d(xi_j) = dxi_j`, `d(dx_i) = d(dxi_j) = 0`.
    pub fn ext_d(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        out.lossy = self.lossy;
        for (m, c) in &self.terms {
            let xi_count = m.base.xi_count();
            // d over the x factors: produces dx_i, which is odd and must
            // cross the xi block and slot into the dx block.
            for i in 1..=self.ctx.num_x() {
                let e = m.base.xexp[i - 1];
                if e == 0 {
                    continue;
                }
                let bit = 1u32 << (i - 1);
                if m.dxmask & bit != 0 {
                    continue;
                }
                let below = (m.dxmask & (bit - 1)).count_ones();
                let exp = xi_count + below;
                let mut base = m.base.clone();
                base.xexp[i - 1] = e - 1;
                let mut coeff = c * qi(e as i64);
                if exp % 2 == 1 {
                    coeff = -coeff;
                }
                out.add_term(
                    FormMonomial {
                        base,
                        dxmask: m.dxmask | bit,
                        dxiexp: m.dxiexp.clone(),
                    },
                    coeff,
                );
            }
            // d over the xi factors: dxi_j is even, so only the xi
            // position sign survives.
            for (r, j) in mask_indices(m.base.ximask).into_iter().enumerate() {
                let mut base = m.base.clone();
                base.ximask &= !(1 << (j - 1));
                let mut dxiexp = m.dxiexp.clone();
                dxiexp[j - 1] += 1;
                let mut coeff = c.clone();
                if r % 2 == 1 {
                    coeff = -coeff;
                }
                out.add_term(
                    FormMonomial {
                        base,
                        dxmask: m.dxmask,
                        dxiexp,
                    },
                    coeff,
                );
            }
        }
        out
    }

    /// Contraction along a homogeneous field: the derivation of parity
    /// `p(X) + 1` with `i_X(dx_j) = (-1)^{p(X)} X(x_j)` and
    /// `i_X` vanishing on functions.
    pub fn contract(&self, x: &SuperVectorField) -> Result<Self, AlgError> {
        self.ctx.same_as(x.context())?;
        let p = match x.parity() {
            TermParity::Even => 0u32,
            TermParity::Odd => 1,
            TermParity::Mixed => {
                return Err(AlgError::NotHomogeneous(
                    "contraction needs a homogeneous field".into(),
                ))
            }
        };
        let mut out = Self::zero(self.ctx);
        out.lossy = self.lossy || !x.is_exact();
        for (m, c) in &self.terms {
            let xi_count = m.base.xi_count();
            // dx factors
            for (s0, i) in mask_indices(m.dxmask).into_iter().enumerate() {
                let s = s0 as u32 + 1;
                let coeff_poly = x.xcoef(i);
                if coeff_poly.is_zero() {
                    continue;
                }
                let exp = (p + 1) * xi_count + s + p + 1;
                let piece = self.base_times(
                    m,
                    coeff_poly,
                    m.dxmask & !(1 << (i - 1)),
                    m.dxiexp.clone(),
                    c,
                    exp % 2 == 1,
                    qi(1),
                    &mut out,
                );
                piece?;
            }
            // dxi factors
            for j in 1..=self.ctx.num_xi() {
                let g = m.dxiexp[j - 1];
                if g == 0 {
                    continue;
                }
                let coeff_poly = x.xicoef(j);
                if coeff_poly.is_zero() {
                    continue;
                }
                let exp = (p + 1) * xi_count + p;
                let mut dxiexp = m.dxiexp.clone();
                dxiexp[j - 1] -= 1;
                self.base_times(
                    m,
                    coeff_poly,
                    m.dxmask,
                    dxiexp,
                    c,
                    exp % 2 == 1,
                    qi(g as i64),
                    &mut out,
                )?;
            }
        }
        Ok(out)
    }

    /// Helper: add `sign * mult * c * (base * poly) * dx_mask dxi^exp`.
    #[allow(clippy::too_many_arguments)]
    fn base_times(
        &self,
        m: &FormMonomial,
        poly: &SuperPolynomial,
        dxmask: u32,
        dxiexp: Vec<u8>,
        c: &Scalar,
        negate: bool,
        mult: Scalar,
        out: &mut Self,
    ) -> Result<(), AlgError> {
        for (pm, pc) in poly.terms() {
            match crate::monomial::mono_mul(&self.ctx, &m.base, pm)? {
                crate::monomial::MonoProduct::Zero => {}
                crate::monomial::MonoProduct::Truncated => out.lossy = true,
                crate::monomial::MonoProduct::Product(s, base) => {
                    let mut coeff = c * pc * &mult;
                    if (s < 0) ^ negate {
                        coeff = -coeff;
                    }
                    out.add_term(
                        FormMonomial {
                            base,
                            dxmask,
                            dxiexp: dxiexp.clone(),
                        },
                        coeff,
                    );
                }
            }
        }
        Ok(())
    }

    /// Lie derivative via Cartan's formula
    /// `L_X = d i_X + (-1)^{p(X)} i_X d` (the super bracket of the two
    /// odd/even operators `d` and `i_X`). Requires homogeneous `X`.
    pub fn lie_derivative(&self, x: &SuperVectorField) -> Result<Self, AlgError> {
        let p = match x.parity() {
            TermParity::Even => 0u32,
            TermParity::Odd => 1,
            TermParity::Mixed => {
                return Err(AlgError::NotHomogeneous(
                    "Lie derivative needs a homogeneous field".into(),
                ))
            }
        };
        let a = self.contract(x)?.ext_d();
        let b = self.ext_d().contract(x)?;
        Ok(if p % 2 == 1 { &a - &b } else { &a + &b })
    }

    /// Lie derivative for a possibly mixed field, split by parity.
    pub fn lie_derivative_mixed(&self, x: &SuperVectorField) -> Result<Self, AlgError> {
        let mut out = Self::zero(self.ctx);
        for p in 0..2 {
            let part = x.parity_part(p);
            if !part.is_zero() {
                out = &out + &self.lie_derivative(&part)?;
            }
        }
        Ok(out)
    }

    /// Twisted action `X -> L_X + lambda div X` on k-forms.
    pub fn twisted_action(
        &self,
        x: &SuperVectorField,
        spec: &TwistSpec,
    ) -> Result<Self, AlgError> {
        match self.form_degree() {
            Some(d) if d == spec.k => {}
            None if self.is_zero() => {}
            other => {
                return Err(AlgError::DegreeMismatch(format!(
                    "expected a {}-form, found degree {:?}",
                    spec.k, other
                )))
            }
        }
        let lie = self.lie_derivative(x)?;
        if spec.lambda.is_zero() {
            return Ok(lie);
        }
        let div = x.divergence()?;
        Ok(&lie + &self.mul_poly(&div)?.scale(&spec.lambda))
    }

    /// Restrict to terms of one form degree.
    pub fn degree_part(&self, k: u32) -> Self {
        let mut out = Self::zero(self.ctx);
        out.lossy = self.lossy;
        for (m, c) in &self.terms {
            if m.form_degree() == k {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }
}

impl Add for &DifferentialForm {
    type Output = DifferentialForm;
    fn add(self, rhs: &DifferentialForm) -> DifferentialForm {
        self.ctx.same_as(&rhs.ctx).expect("context mismatch in +");
        let mut out = self.clone();
        out.lossy |= rhs.lossy;
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: &DifferentialForm) -> DifferentialForm {
        self + &-rhs
    }
}

impl Neg for &DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -&*v;
        }
        out
    }
}

impl std::fmt::Display for DifferentialForm {
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
            let mut parts = Vec::new();
            if !m.base.is_one() || (m.dxmask == 0 && m.dxi_degree() == 0) || !abs.is_one() {
                let base =
                    SuperPolynomial::from_monomial(self.ctx, m.base.clone(), abs.clone());
                parts.push(base.to_string());
            }
            let dxs: Vec<String> = mask_indices(m.dxmask)
                .into_iter()
                .map(|i| format!("dx{i}"))
                .collect();
            if !dxs.is_empty() {
                parts.push(dxs.join("^"));
            }
            for (j, &e) in m.dxiexp.iter().enumerate() {
                if e == 1 {
                    parts.push(format!("dxi{}", j + 1));
                } else if e > 1 {
                    parts.push(format!("(dxi{})^{}", j + 1, e));
                }
            }
            write!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

/// `i_X(dx_1 ^ ... ^ dx_m)` for a field over a purely even context.
pub fn vf_to_topform(x: &SuperVectorField) -> Result<DifferentialForm, AlgError> {
    let ctx = *x.context();
    if ctx.num_xi() != 0 || ctx.is_laurent() {
        return Err(AlgError::InvalidContext(
            "the volume-form isomorphism needs a purely even jet context".into(),
        ));
    }
    volume_form(ctx).contract(x)
}

/// The volume form `dx_1 ^ ... ^ dx_m`.
pub fn volume_form(ctx: Context) -> DifferentialForm {
    let m = ctx.num_x();
    let mono = FormMonomial {
        base: SuperMonomial::one(m),
        dxmask: if m == 32 { u32::MAX } else { (1u32 << m) - 1 },
        dxiexp: vec![0; ctx.num_xi()],
    };
    DifferentialForm::from_terms(ctx, [(mono, qi(1))])
}

/// Inverse of [`vf_to_topform`]: reads the field off an `(m-1)`-form.
/// Fails when a term is not an `(m-1)`-form over a purely even context.
pub fn closedform_to_vf(alpha: &DifferentialForm) -> Result<SuperVectorField, AlgError> {
    let ctx = *alpha.context();
    if ctx.num_xi() != 0 || ctx.is_laurent() {
        return Err(AlgError::InvalidContext(
            "the volume-form isomorphism needs a purely even jet context".into(),
        ));
    }
    if !alpha.is_exact() {
        return Err(AlgError::Inconclusive(
            "the form was truncated; its preimage field is not certified".into(),
        ));
    }
    let m = ctx.num_x();
    let full: u32 = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut coeffs = vec![SuperPolynomial::zero(ctx); m];
    for (mono, c) in alpha.terms() {
        if mono.form_degree() != (m as u32) - 1 || mono.dxmask.count_ones() != (m as u32) - 1 {
            return Err(AlgError::NotSolvable(format!(
                "term of form degree {} is not in the image of the contraction",
                mono.form_degree()
            )));
        }
        let missing = full & !mono.dxmask;
        let i = missing.trailing_zeros() as usize + 1;
        // i_X vol picks up (-1)^(i+1) on the d/dx_i slot
        let mut coeff = c.clone();
        if i % 2 == 0 {
            coeff = -coeff;
        }
        coeffs[i - 1] = coeffs[i - 1].try_add(&SuperPolynomial::from_monomial(
            ctx,
            mono.base.clone(),
            coeff,
        ))?;
    }
    SuperVectorField::from_parts(ctx, coeffs, vec![])
}

/// Basis of closed k-forms with coefficient x-degree at most `degmax`,
/// in deterministic order.
pub fn closed_basis(
    ctx: Context,
    k: u32,
    degmax: u32,
) -> Result<Vec<DifferentialForm>, AlgError> {
    if ctx.is_laurent() {
        return Err(AlgError::InvalidContext("forms live over jet contexts".into()));
    }
    if degmax > ctx.jet_degree().unwrap_or(0) {
        return Err(AlgError::Inconclusive(format!(
            "degmax {degmax} exceeds the context window"
        )));
    }
    let monos = enumerate_form_monomials(&ctx, k, degmax as i64);
    // coordinates of the d-images
    let mut coord_index: BTreeMap<FormMonomial, usize> = BTreeMap::new();
    let mut images = Vec::with_capacity(monos.len());
    for m in &monos {
        let f = DifferentialForm::from_terms(ctx, [(m.clone(), qi(1))]);
        let df = f.ext_d();
        if !df.is_exact() {
            return Err(AlgError::Inconclusive(
                "exterior derivative left the truncation window".into(),
            ));
        }
        for key in df.terms.keys() {
            let next = coord_index.len();
            coord_index.entry(key.clone()).or_insert(next);
        }
        images.push(df);
    }
    let rows = coord_index.len().max(1);
    let mut mat = QMatrix::zeros(rows, monos.len());
    for (j, df) in images.iter().enumerate() {
        for (key, c) in &df.terms {
            mat.set(coord_index[key], j, c.clone());
        }
    }
    let kernel = mat.kernel_basis();
    Ok(kernel
        .into_iter()
        .map(|v| {
            DifferentialForm::from_terms(
                ctx,
                v.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (monos[j].clone(), c)),
            )
        })
        .collect())
}

/// All monomial k-forms with base x-degree at most `degmax`, sorted.
pub fn enumerate_form_monomials(ctx: &Context, k: u32, degmax: i64) -> Vec<FormMonomial> {
    let m = ctx.num_x();
    let n = ctx.num_xi();
    let mut bases = Vec::new();
    let mut exp = vec![0i32; m];
    enumerate_exponents(&mut bases, &mut exp, 0, degmax);
    let mut out = Vec::new();
    for xexp in &bases {
        for ximask in 0u32..(1 << n) {
            let base = SuperMonomial {
                xexp: xexp.clone(),
                ximask,
            };
            // split k into dx count and dxi degree
            for dxmask in 0u32..(1 << m) {
                let t = dxmask.count_ones();
                if t > k {
                    continue;
                }
                let g = k - t;
                if g > DXI_DEGREE_CAP {
                    continue;
                }
                let mut stack = Vec::new();
                enumerate_compositions(&mut stack, n, g, &mut |comp| {
                    out.push(FormMonomial {
                        base: base.clone(),
                        dxmask,
                        dxiexp: comp.to_vec(),
                    });
                });
            }
        }
    }
    out.sort();
    out
}

fn enumerate_exponents(out: &mut Vec<Vec<i32>>, cur: &mut Vec<i32>, pos: usize, left: i64) {
    if pos == cur.len() {
        out.push(cur.clone());
        return;
    }
    for e in 0..=left {
        cur[pos] = e as i32;
        enumerate_exponents(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

/// All ways to write `total` as an ordered sum of `n` nonneg u8 parts.
fn enumerate_compositions(
    stack: &mut Vec<u8>,
    n: usize,
    total: u32,
    f: &mut impl FnMut(&[u8]),
) {
    if stack.len() == n {
        if total == 0 {
            f(stack);
        }
        return;
    }
    let remaining_slots = n - stack.len();
    if remaining_slots == 1 {
        stack.push(total as u8);
        f(stack);
        stack.pop();
        return;
    }
    for e in 0..=total {
        stack.push(e as u8);
        enumerate_compositions(stack, n, total - e, f);
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn ctx() -> Context {
        Context::jet(2, 2, 4)
    }

    #[test]
    fn dx_anticommute_dxi_commute() {
        let c = ctx();
        let dx1 = DifferentialForm::dx(c, 1).unwrap();
        let dx2 = DifferentialForm::dx(c, 2).unwrap();
        assert_eq!(
            dx1.wedge(&dx2).unwrap(),
            -&dx2.wedge(&dx1).unwrap()
        );
        assert!(dx1.wedge(&dx1).unwrap().is_zero());
        let dxi1 = DifferentialForm::dxi(c, 1).unwrap();
        let sq = dxi1.wedge(&dxi1).unwrap();
        assert!(!sq.is_zero(), "(dxi1)^2 survives");
        assert_eq!(sq, dxi1.wedge(&dxi1).unwrap());
    }

    #[test]
    fn d_on_generators() {
        let c = ctx();
        let x1 = SuperPolynomial::x(c, 1).unwrap();
        assert_eq!(
            DifferentialForm::from_poly(&x1).ext_d(),
            DifferentialForm::dx(c, 1).unwrap()
        );
        // d(x1 xi1) = -xi1 dx1 + x1 dxi1
        let f = SuperPolynomial::parse(c, "x1 xi1").unwrap();
        let df = DifferentialForm::from_poly(&f).ext_d();
        let xi1 = SuperPolynomial::xi(c, 1).unwrap();
        let expect = &-&DifferentialForm::dx(c, 1)
            .unwrap()
            .mul_poly(&xi1)
            .unwrap()
            + &DifferentialForm::dxi(c, 1).unwrap().mul_poly(&x1).unwrap();
        assert_eq!(df, expect);
    }

    #[test]
    fn d_squared_zero() {
        let c = ctx();
        let f = SuperPolynomial::parse(c, "x1 x2 xi1").unwrap();
        assert!(DifferentialForm::from_poly(&f).ext_d().ext_d().is_zero());
        for k in 0..=2u32 {
            for m in enumerate_form_monomials(&c, k, 2) {
                let form = DifferentialForm::from_terms(c, [(m.clone(), qi(1))]);
                assert!(form.ext_d().ext_d().is_zero(), "d^2 != 0 on {form}");
            }
        }
    }

    #[test]
    fn contraction_values() {
        let c = ctx();
        let ddx1 = SuperVectorField::ddx(c, 1).unwrap();
        let dx1 = DifferentialForm::dx(c, 1).unwrap();
        let dx2 = DifferentialForm::dx(c, 2).unwrap();
        assert_eq!(
            dx1.contract(&ddx1).unwrap(),
            DifferentialForm::from_poly(&SuperPolynomial::one(c))
        );
        assert!(dx2.contract(&ddx1).unwrap().is_zero());
        // odd field: i_{d/dxi1}(dxi1) = -1
        let ddxi1 = SuperVectorField::ddxi(c, 1).unwrap();
        let dxi1 = DifferentialForm::dxi(c, 1).unwrap();
        assert_eq!(
            dxi1.contract(&ddxi1).unwrap(),
            DifferentialForm::from_poly(&SuperPolynomial::constant(c, qi(-1)))
        );
        // functions contract to zero
        let f = DifferentialForm::from_poly(&SuperPolynomial::parse(c, "x1 xi2").unwrap());
        assert!(f.contract(&ddx1).unwrap().is_zero());
        assert!(f.contract(&ddxi1).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let c = ctx();
        // L_{d/dx1}(x1 dx2) = dx2
        let ddx1 = SuperVectorField::ddx(c, 1).unwrap();
        let alpha = DifferentialForm::dx(c, 2)
            .unwrap()
            .mul_poly(&SuperPolynomial::x(c, 1).unwrap())
            .unwrap();
        assert_eq!(
            alpha.lie_derivative(&ddx1).unwrap(),
            DifferentialForm::dx(c, 2).unwrap()
        );
        // on functions, L_X f = X(f)
        let e = SuperVectorField::parse(c, "x1 d/dx1").unwrap();
        let f = SuperPolynomial::parse(c, "x1^2").unwrap();
        assert_eq!(
            DifferentialForm::from_poly(&f).lie_derivative(&e).unwrap(),
            DifferentialForm::from_poly(&e.apply(&f).unwrap())
        );
    }

    #[test]
    fn lie_derivative_commutes_with_d() {
        let c = Context::jet(2, 1, 3);
        let fields = [
            SuperVectorField::parse(c, "x1 d/dx1 + xi1 d/dxi1").unwrap(),
            SuperVectorField::parse(c, "xi1 d/dx2").unwrap(),
            SuperVectorField::parse(c, "x2 d/dxi1").unwrap(),
        ];
        let forms = [
            DifferentialForm::from_poly(&SuperPolynomial::parse(c, "x1 x2 xi1").unwrap()),
            DifferentialForm::dx(c, 2)
                .unwrap()
                .mul_poly(&SuperPolynomial::parse(c, "x1 xi1").unwrap())
                .unwrap(),
            DifferentialForm::dxi(c, 1)
                .unwrap()
                .mul_poly(&SuperPolynomial::parse(c, "x2^2").unwrap())
                .unwrap(),
        ];
        for x in &fields {
            for a in &forms {
                let lhs = a.lie_derivative(x).unwrap().ext_d();
                let rhs = a.ext_d().lie_derivative(x).unwrap();
                assert_eq!(lhs, rhs, "[L_X, d] != 0 for X = {x}, a = {a}");
            }
        }
    }

    #[test]
    fn contraction_is_a_derivation() {
        let c = Context::jet(2, 2, 3);
        let fields = [
            SuperVectorField::parse(c, "x1 d/dx2").unwrap(),
            SuperVectorField::parse(c, "xi1 d/dx1").unwrap(),
            SuperVectorField::parse(c, "x2 d/dxi1 + xi2 d/dx2").unwrap(),
        ];
        let forms = [
            DifferentialForm::dx(c, 1).unwrap(),
            DifferentialForm::dxi(c, 2)
                .unwrap()
                .mul_poly(&SuperPolynomial::parse(c, "xi1").unwrap())
                .unwrap(),
            DifferentialForm::dx(c, 2)
                .unwrap()
                .mul_poly(&SuperPolynomial::parse(c, "x1").unwrap())
                .unwrap(),
        ];
        for x in &fields {
            let px = match x.parity() {
                TermParity::Even => 0,
                TermParity::Odd => 1,
                TermParity::Mixed => unreachable!(),
            };
            for a in &forms {
                for b in &forms {
                    let pa = match a.parity() {
                        TermParity::Even => 0u32,
                        TermParity::Odd => 1,
                        TermParity::Mixed => continue,
                    };
                    let lhs = a.wedge(b).unwrap().contract(x).unwrap();
                    let first = a.contract(x).unwrap().wedge(b).unwrap();
                    let second = a.wedge(&b.contract(x).unwrap()).unwrap();
                    let rhs = if ((px + 1) * pa) % 2 == 1 {
                        &first - &second
                    } else {
                        &first + &second
                    };
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn volume_isomorphism() {
        let c = Context::jet(2, 0, 3);
        let x = SuperVectorField::ddx(c, 1).unwrap();
        assert_eq!(
            vf_to_topform(&x).unwrap(),
            DifferentialForm::dx(c, 2).unwrap()
        );
        // round trip on a divergence-free field
        let f = SuperVectorField::parse(c, "x2 d/dx1 - x1 d/dx2").unwrap();
        assert!(f.divergence().unwrap().is_zero());
        assert_eq!(closedform_to_vf(&vf_to_topform(&f).unwrap()).unwrap(), f);
        // d(i_X vol) = div(X) vol
        let g = SuperVectorField::parse(c, "x1^2 d/dx1 + x1 x2 d/dx2").unwrap();
        let lhs = vf_to_topform(&g).unwrap().ext_d();
        let rhs = volume_form(c).mul_poly(&g.divergence().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn twisted_action_at_minus_one_kills_euler_on_dx() {
        // m = 1: L_X dx1 - div(X) dx1 = 0 for X = x1 d/dx1
        let c = Context::jet(1, 0, 3);
        let x = SuperVectorField::parse(c, "x1 d/dx1").unwrap();
        let alpha = DifferentialForm::dx(c, 1).unwrap();
        let spec = TwistSpec { lambda: qi(-1), k: 1 };
        assert!(alpha.twisted_action(&x, &spec).unwrap().is_zero());
        let spec0 = TwistSpec { lambda: qi(0), k: 1 };
        assert_eq!(
            alpha.twisted_action(&x, &spec0).unwrap(),
            alpha.lie_derivative(&x).unwrap()
        );
    }

    #[test]
    fn closed_basis_examples() {
        let c2 = Context::jet(2, 0, 3);
        let top = closed_basis(c2, 2, 0).unwrap();
        assert_eq!(top.len(), 1);
        let c5 = Context::jet(5, 0, 2);
        let const2 = closed_basis(c5, 2, 0).unwrap();
        assert_eq!(const2.len(), 10);
        // degree-1 one-forms on m=2: x1 dx1 closed, x1 dx2 not
        let deg1 = closed_basis(c2, 1, 1).unwrap();
        let x1dx1 = DifferentialForm::dx(c2, 1)
            .unwrap()
            .mul_poly(&SuperPolynomial::x(c2, 1).unwrap())
            .unwrap();
        let x1dx2 = DifferentialForm::dx(c2, 2)
            .unwrap()
            .mul_poly(&SuperPolynomial::x(c2, 1).unwrap())
            .unwrap();
        let span = span_contains(&deg1, &x1dx1);
        assert!(span);
        assert!(!span_contains(&deg1, &x1dx2));
    }

    fn span_contains(basis: &[DifferentialForm], target: &DifferentialForm) -> bool {
        let mut coords: BTreeMap<FormMonomial, usize> = BTreeMap::new();
        for f in basis.iter().chain([target]) {
            for m in f.terms.keys() {
                let next = coords.len();
                coords.entry(m.clone()).or_insert(next);
            }
        }
        let dim = coords.len();
        let cols: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|f| {
                let mut v = vec![Scalar::zero(); dim];
                for (m, c) in &f.terms {
                    v[coords[m]] = c.clone();
                }
                v
            })
            .collect();
        let solver = crate::linalg::SpanSolver::new(dim, &cols);
        let mut t = vec![Scalar::zero(); dim];
        for (m, c) in &target.terms {
            t[coords[m]] = c.clone();
        }
        solver.contains(&t)
    }

    #[test]
    fn wedge_base_crossing_sign() {
        // (xi1 dx1) ^ (xi2 dx2): moving xi2 past dx1 gives one sign
        let c = ctx();
        let a = DifferentialForm::dx(c, 1)
            .unwrap()
            .mul_poly(&SuperPolynomial::xi(c, 1).unwrap())
            .unwrap();
        let b = DifferentialForm::dx(c, 2)
            .unwrap()
            .mul_poly(&SuperPolynomial::xi(c, 2).unwrap())
            .unwrap();
        let ab = a.wedge(&b).unwrap();
        // canonical: xi1 xi2 dx1 dx2 with sign -1
        let expect = DifferentialForm::from_terms(
            c,
            [(
                FormMonomial {
                    base: SuperMonomial {
                        xexp: vec![0, 0],
                        ximask: 0b11,
                    },
                    dxmask: 0b11,
                    dxiexp: vec![0, 0],
                },
                q(-1, 1),
            )],
        );
        assert_eq!(ab, expect);
    }
}
