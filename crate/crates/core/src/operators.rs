//! Complex polynomial potentials, admissibility checks, and the two
//! discretization schemes (Hermite-Galerkin and finite differences).

use crate::error::{Error, Result};
use crate::numkernel::{eigenvalues, ComplexMatrix};
use num_complex::Complex64;

/// A polynomial potential V(x) = sum_j c_j x^j with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    coefficients: Vec<Complex64>,
    label: String,
}

impl PotentialSpec {
    /// Coefficients c_0..c_deg; degree >= 1 with nonzero leading coefficient.
    pub fn new(mut coefficients: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        while coefficients.len() > 1 && coefficients.last().map_or(false, |c| c.norm() == 0.0) {
            coefficients.pop();
        }
        if coefficients.len() < 2 {
            return Err(Error::InvalidArgument(
                "potential must have degree >= 1".into(),
            ));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("potential coefficients must be finite".into()));
        }
        Ok(Self {
            coefficients,
            label: label.into(),
        })
    }

    /// Parse the potential mini-language: sums of terms like `1i*x^3 + 1*x^2`,
    /// complex literals `a`, `bi`, `a+bi` (unparenthesized literals with both
    /// parts read as two separate terms, which sums to the same polynomial),
    /// and optional parentheses for grouped coefficients like `(1+2i)*x^2`.
    pub fn parse(input: &str) -> Result<Self> {
        let tokens = tokenize(input)?;
        let mut parser = Parser { tokens, pos: 0 };
        let poly = parser.expression()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::InvalidArgument(format!(
                "unexpected trailing input in potential '{input}'"
            )));
        }
        Self::new(poly, input.trim())
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// V(x) at real x, evaluated exactly as written (Horner).
    pub fn eval(&self, x: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Derivative polynomial V'(x); degree 0 results are padded so the
    /// invariants of `PotentialSpec` are not needed here.
    fn derivative_coefficients(&self) -> Vec<Complex64> {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| c * j as f64)
            .collect()
    }

    pub fn eval_derivative(&self, x: f64) -> Complex64 {
        let d = self.derivative_coefficients();
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in d.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl std::fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (j, &c) in self.coefficients.iter().enumerate().rev() {
            if c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            match j {
                0 => {}
                1 => write!(f, "*x")?,
                _ => write!(f, "*x^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Imag(f64),
    X,
    Caret,
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            'x' | 'X' => {
                out.push(Token::X);
                i += 1;
            }
            'i' | 'I' | 'j' => {
                out.push(Token::Imag(1.0));
                i += 1;
            }
            _ if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_digit()
                        || chars[i] == '.'
                        || chars[i] == 'e'
                        || chars[i] == 'E'
                        || ((chars[i] == '+' || chars[i] == '-')
                            && i > start
                            && (chars[i - 1] == 'e' || chars[i - 1] == 'E')))
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value: f64 = text
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad number '{text}'")))?;
                if i < chars.len() && (chars[i] == 'i' || chars[i] == 'I' || chars[i] == 'j') {
                    out.push(Token::Imag(value));
                    i += 1;
                } else {
                    out.push(Token::Number(value));
                }
            }
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unexpected character '{c}' in potential"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type Poly = Vec<Complex64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_in(acc: &mut Poly, p: &Poly, sign: f64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Complex64::new(0.0, 0.0));
    }
    for (a, &b) in acc.iter_mut().zip(p) {
        *a += sign * b;
    }
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expression(&mut self) -> Result<Poly> {
        let mut sign = 1.0;
        if matches!(self.peek(), Some(Token::Minus)) {
            self.pos += 1;
            sign = -1.0;
        } else if matches!(self.peek(), Some(Token::Plus)) {
            self.pos += 1;
        }
        let mut acc = vec![Complex64::new(0.0, 0.0)];
        let first = self.term()?;
        poly_add_in(&mut acc, &first, sign);
        while let Some(tok) = self.peek() {
            let sign = match tok {
                Token::Plus => 1.0,
                Token::Minus => -1.0,
                _ => break,
            };
            self.pos += 1;
            let t = self.term()?;
            poly_add_in(&mut acc, &t, sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = poly_mul(&acc, &f);
                }
                // juxtaposition like "2i x" is not in the grammar; require '*'
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Token::Number(v)) => {
                self.pos += 1;
                Ok(vec![Complex64::new(v, 0.0)])
            }
            Some(Token::Imag(v)) => {
                self.pos += 1;
                Ok(vec![Complex64::new(0.0, v)])
            }
            Some(Token::X) => {
                self.pos += 1;
                let mut power = 1usize;
                if matches!(self.peek(), Some(Token::Caret)) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Token::Number(v)) if v.fract() == 0.0 && v >= 0.0 && v <= 32.0 => {
                            self.pos += 1;
                            power = v as usize;
                        }
                        _ => {
                            return Err(Error::InvalidArgument(
                                "exponent must be an integer in 0..=32".into(),
                            ))
                        }
                    }
                }
                let mut p = vec![Complex64::new(0.0, 0.0); power + 1];
                p[power] = Complex64::new(1.0, 0.0);
                Ok(p)
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expression()?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(Error::InvalidArgument("unbalanced parenthesis".into())),
                }
            }
            other => Err(Error::InvalidArgument(format!(
                "unexpected token {other:?} in potential"
            ))),
        }
    }
}

/// Outcome of the admissibility checks (advisory; nothing refuses to run on
/// an inadmissible potential, the CLI only warns).
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    /// Re V + shift_d >= 0 held on the sample and did not degrade with range.
    pub re_nonneg: bool,
    pub shift_d: f64,
    /// Largest c from the geometric sweep with Re V(x) >= c x^2 - shift_d.
    pub quad_c: f64,
    /// One valid (a, b) with |V'|^2 <= a + b |V|^2 on the sampled range.
    pub grad_bound_ab: Option<(f64, f64)>,
    pub unbounded: bool,
}

/// Evaluate the admissibility conditions on a dense sample of
/// [-sample_range, sample_range] plus symbolic degree checks.
pub fn check_admissibility(v: &PotentialSpec, sample_range: f64) -> AdmissibilityReport {
    assert!(sample_range > 0.0, "sample_range must be positive");
    let n = 4001usize;
    let xs: Vec<f64> = (0..n)
        .map(|i| -sample_range + 2.0 * sample_range * i as f64 / (n - 1) as f64)
        .collect();
    let re_v: Vec<f64> = xs.iter().map(|&x| v.eval(x).re).collect();

    // A sampled function counts as bounded below when shrinking the range
    // does not raise its minimum: polynomials heading to -infinity keep
    // digging as the window grows.
    let bounded_below = |vals: &dyn Fn(f64) -> f64| -> bool {
        let min_on = |r: f64| {
            xs.iter()
                .zip(vals_iter(&xs, vals))
                .filter(|(x, _)| x.abs() <= r)
                .map(|(_, v)| v)
                .fold(f64::INFINITY, f64::min)
        };
        let full = min_on(sample_range);
        let half = min_on(sample_range / 2.0);
        let scale = 1.0 + full.abs().max(half.abs());
        full >= half - 1e-9 * scale
    };

    let re_fun = |x: f64| v.eval(x).re;
    let re_nonneg = bounded_below(&re_fun);

    // geometric sweep for the quadratic lower bound
    let mut quad_c = 0.0f64;
    let mut best_slack_min = re_v.iter().cloned().fold(f64::INFINITY, f64::min);
    let steps: Vec<f64> = (-120..=120).map(|k| 2f64.powf(k as f64 / 4.0)).collect();
    for &c in steps.iter().rev() {
        let slack_fun = |x: f64| v.eval(x).re - c * x * x;
        if bounded_below(&slack_fun) {
            quad_c = c;
            best_slack_min = xs.iter().map(|&x| slack_fun(x)).fold(f64::INFINITY, f64::min);
            break;
        }
    }
    let shift_d = (-best_slack_min).max(0.0);

    let unbounded = v.degree() >= 1;
    let grad_bound_ab = {
        // b = 1 works asymptotically since deg(V') < deg(V); a covers the
        // compact part from the sample
        let b = 1.0;
        let a = xs
            .iter()
            .map(|&x| v.eval_derivative(x).norm_sqr() - b * v.eval(x).norm_sqr())
            .fold(0.0f64, f64::max);
        Some((a, b))
    };

    AdmissibilityReport {
        re_nonneg,
        shift_d,
        quad_c,
        grad_bound_ab,
        unbounded,
    }
}

fn vals_iter<'a>(xs: &'a [f64], f: &'a dyn Fn(f64) -> f64) -> impl Iterator<Item = f64> + 'a {
    xs.iter().map(move |&x| f(x))
}

/// Discretization scheme tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    HermiteGalerkin,
    FiniteDifference,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scheme::HermiteGalerkin => write!(f, "hermite"),
            Scheme::FiniteDifference => write!(f, "fd"),
        }
    }
}

/// A discretized Schrodinger operator together with its scheme metadata.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub matrix: ComplexMatrix,
    pub scheme: Scheme,
    pub basis_size: usize,
    /// Hermite scale parameter or FD half-width L, by scheme.
    pub scale_or_l: f64,
    pub potential: PotentialSpec,
    /// Coefficient of -d^2/dx^2; 1 except for semiclassical scans.
    pub diffusion: f64,
}

/// Default Hermite scale heuristic.
pub fn default_hermite_scale(degree: usize) -> f64 {
    ((degree + 1) as f64).powf(-1.0 / (degree + 2) as f64)
}

/// Galerkin matrix of -d^2/dx^2 + V(x) in the orthonormal scaled Hermite
/// basis h_k(x/s)/sqrt(s). The position matrix is built on a ladder extended
/// by deg(V) indexes so powers of X are exact before truncation.
pub fn hermite_discretize(v: &PotentialSpec, n: usize, scale: f64) -> Result<OperatorMatrix> {
    if n < 4 {
        return Err(Error::InvalidArgument("hermite_discretize needs N >= 4".into()));
    }
    if scale <= 0.0 {
        return Err(Error::InvalidArgument("scale must be positive".into()));
    }
    let deg = v.degree();
    let m = n + deg;
    // X on the extended ladder
    let mut x = vec![0.0f64; m * m];
    for k in 0..m - 1 {
        let val = scale * ((k + 1) as f64 / 2.0).sqrt();
        x[k * m + k + 1] = val;
        x[(k + 1) * m + k] = val;
    }
    let mut h = ComplexMatrix::zeros(n, n);
    // P^2 from the ladder algebra
    for k in 0..n {
        let cur = h.get(k, k) + Complex64::new((2 * k + 1) as f64 / (2.0 * scale * scale), 0.0);
        h.set(k, k, cur);
    }
    for k in 0..n.saturating_sub(2) {
        let val = -(((k + 1) * (k + 2)) as f64).sqrt() / (2.0 * scale * scale);
        let cur = h.get(k, k + 2) + Complex64::new(val, 0.0);
        h.set(k, k + 2, cur);
        let cur = h.get(k + 2, k) + Complex64::new(val, 0.0);
        h.set(k + 2, k, cur);
    }
    // powers of X, truncated after the product
    let coeffs = v.coefficients();
    let mut xp: Vec<f64> = (0..m * m)
        .map(|idx| if idx % (m + 1) == 0 { 1.0 } else { 0.0 })
        .collect();
    for (j, &c) in coeffs.iter().enumerate() {
        if j > 0 {
            xp = real_matmul(&xp, &x, m);
        }
        if c.norm() == 0.0 {
            continue;
        }
        for r in 0..n {
            for q in 0..n {
                let val = xp[r * m + q];
                if val != 0.0 {
                    let cur = h.get(r, q) + c * val;
                    h.set(r, q, cur);
                }
            }
        }
    }
    Ok(OperatorMatrix {
        matrix: h,
        scheme: Scheme::HermiteGalerkin,
        basis_size: n,
        scale_or_l: scale,
        potential: v.clone(),
        diffusion: 1.0,
    })
}

fn real_matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; n * n];
    unsafe {
        matrixmultiply::dgemm(
            n,
            n,
            n,
            1.0,
            a.as_ptr(),
            n as isize,
            1,
            b.as_ptr(),
            n as isize,
            1,
            0.0,
            out.as_mut_ptr(),
            n as isize,
            1,
        );
    }
    out
}

/// Central second differences on the uniform Dirichlet grid
/// x_j = -L + j h, h = 2L/(N+1), j = 1..N.
pub fn fd_discretize(v: &PotentialSpec, n: usize, l: f64) -> Result<OperatorMatrix> {
    fd_discretize_with_diffusion(v, n, l, 1.0)
}

/// FD scheme with an explicit diffusion coefficient (for -h^2 d^2/dx^2 in
/// semiclassical scans).
pub fn fd_discretize_with_diffusion(
    v: &PotentialSpec,
    n: usize,
    l: f64,
    diffusion: f64,
) -> Result<OperatorMatrix> {
    if n < 8 {
        return Err(Error::InvalidArgument("fd_discretize needs N >= 8".into()));
    }
    if l <= 0.0 || diffusion <= 0.0 {
        return Err(Error::InvalidArgument("L and diffusion must be positive".into()));
    }
    let h = 2.0 * l / (n as f64 + 1.0);
    let mut m = ComplexMatrix::zeros(n, n);
    let off = Complex64::new(-diffusion / (h * h), 0.0);
    for j in 0..n {
        let xj = -l + h * (j as f64 + 1.0);
        m.set(j, j, Complex64::new(2.0 * diffusion / (h * h), 0.0) + v.eval(xj));
        if j + 1 < n {
            m.set(j, j + 1, off);
            m.set(j + 1, j, off);
        }
    }
    Ok(OperatorMatrix {
        matrix: m,
        scheme: Scheme::FiniteDifference,
        basis_size: n,
        scale_or_l: l,
        potential: v.clone(),
        diffusion,
    })
}

impl OperatorMatrix {
    /// Grid nodes for the FD scheme.
    pub fn fd_grid(&self) -> Option<Vec<f64>> {
        if self.scheme != Scheme::FiniteDifference {
            return None;
        }
        let n = self.basis_size;
        let l = self.scale_or_l;
        let h = 2.0 * l / (n as f64 + 1.0);
        Some((0..n).map(|j| -l + h * (j as f64 + 1.0)).collect())
    }

    /// Rebuild at a different resolution, same scheme and parameters.
    pub fn refined(&self, n: usize) -> Result<OperatorMatrix> {
        match self.scheme {
            Scheme::HermiteGalerkin => hermite_discretize(&self.potential, n, self.scale_or_l),
            Scheme::FiniteDifference => {
                fd_discretize_with_diffusion(&self.potential, n, self.scale_or_l, self.diffusion)
            }
        }
    }
}

/// Eigenvalues of `op` that persist when the resolution doubles: each value
/// of the N-run is kept when the 2N-run has a value within
/// `tol * max(1, |lambda|)`. Result sorted by increasing real part.
pub struct TrustedSpectrum {
    pub values: Vec<Complex64>,
    /// All eigenvalues of the N-run, sorted by real part (including junk).
    pub raw: Vec<Complex64>,
    /// Drift of the lowest six matched values.
    pub lowest_drift: Vec<f64>,
    /// Convergence gate: lowest six all matched within 1e-6.
    pub gate_passed: bool,
}

pub fn trusted_spectrum(op: &OperatorMatrix, tol: f64) -> Result<TrustedSpectrum> {
    let fine = op.refined(op.basis_size * 2)?;
    let mut coarse_eigs = eigenvalues(&op.matrix)?.values;
    let fine_eigs = eigenvalues(&fine.matrix)?.values;
    coarse_eigs.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    let mut trusted = Vec::new();
    let mut drifts = Vec::new();
    for &lam in &coarse_eigs {
        let dist = fine_eigs
            .iter()
            .map(|&mu| (mu - lam).norm())
            .fold(f64::INFINITY, f64::min);
        if dist <= tol * lam.norm().max(1.0) {
            trusted.push(lam);
            drifts.push(dist);
        }
    }
    let gate_passed = trusted.len() >= 6
        && drifts
            .iter()
            .take(6)
            .zip(trusted.iter().take(6))
            .all(|(d, lam)| *d <= 1e-6 * lam.norm().max(1.0));
    Ok(TrustedSpectrum {
        values: trusted,
        raw: coarse_eigs,
        lowest_drift: drifts.into_iter().take(6).collect(),
        gate_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parses_bender_family() {
        let v = PotentialSpec::parse("1i*x^3 + 1*x^2").unwrap();
        assert_eq!(v.degree(), 3);
        assert!((v.coefficients()[3] - c(0.0, 1.0)).norm() < 1e-15);
        assert!((v.coefficients()[2] - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(v.coefficients()[0].norm(), 0.0);

        let w = PotentialSpec::parse("1i*x^3 - 1*x^2").unwrap();
        assert!((w.coefficients()[2] - c(-1.0, 0.0)).norm() < 1e-15);

        let u = PotentialSpec::parse("(1+2i)*x^2 + 3i").unwrap();
        assert!((u.coefficients()[2] - c(1.0, 2.0)).norm() < 1e-15);
        assert!((u.coefficients()[0] - c(0.0, 3.0)).norm() < 1e-15);

        // unparenthesized a+bi coefficient reads as two terms, same result
        let s = PotentialSpec::parse("1+2i*x^2").unwrap();
        assert!((s.coefficients()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((s.coefficients()[2] - c(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(PotentialSpec::parse("1*y^2").is_err());
        assert!(PotentialSpec::parse("x^").is_err());
        assert!(PotentialSpec::parse("(1+2i*x").is_err());
        assert!(PotentialSpec::parse("5").is_err()); // degree 0
    }

    #[test]
    fn evaluation_matches_horner_by_hand() {
        let v = PotentialSpec::parse("1i*x^3 + 2*x").unwrap();
        let x = 1.5;
        let expect = c(0.0, 1.0) * x * x * x + c(2.0, 0.0) * x;
        assert!((v.eval(x) - expect).norm() < 1e-14);
        let expect_d = c(0.0, 3.0) * x * x + c(2.0, 0.0);
        assert!((v.eval_derivative(x) - expect_d).norm() < 1e-14);
    }

    #[test]
    fn admissibility_of_the_three_reference_potentials() {
        let bender = PotentialSpec::parse("1i*x^3 + 1*x^2").unwrap();
        let r = check_admissibility(&bender, 10.0);
        assert!(r.unbounded && r.re_nonneg);
        assert!((r.quad_c - 1.0).abs() < 1e-12, "quad_c {}", r.quad_c);
        assert!(r.shift_d.abs() < 1e-9);

        let airy = PotentialSpec::parse("1i*x").unwrap();
        let r = check_admissibility(&airy, 10.0);
        assert!(r.unbounded && r.re_nonneg);
        assert_eq!(r.quad_c, 0.0);

        let counter = PotentialSpec::parse("1i*x^3 - 1*x^2").unwrap();
        let r = check_admissibility(&counter, 10.0);
        assert!(r.unbounded);
        assert!(!r.re_nonneg);
        assert_eq!(r.quad_c, 0.0);
    }

    #[test]
    fn quad_bound_invariant_holds_on_samples() {
        for text in ["1i*x^3 + 1*x^2", "1*x^2 + 1*x^4", "2*x^2 - 3"] {
            let v = PotentialSpec::parse(text).unwrap();
            let r = check_admissibility(&v, 8.0);
            if r.quad_c > 0.0 {
                let worst = (0..2001)
                    .map(|i| {
                        let x = -8.0 + 16.0 * i as f64 / 2000.0;
                        v.eval(x).re - r.quad_c * x * x + r.shift_d
                    })
                    .fold(f64::INFINITY, f64::min);
                assert!(worst >= -1e-9, "{text}: worst slack {worst}");
            }
        }
    }

    #[test]
    fn harmonic_oscillator_is_diagonal_in_its_own_basis() {
        let v = PotentialSpec::parse("1*x^2").unwrap();
        let op = hermite_discretize(&v, 12, 1.0).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                let expect = if i == j {
                    c(2.0 * i as f64 + 1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                };
                assert!(
                    (op.matrix.get(i, j) - expect).norm() < 1e-12,
                    "entry ({i},{j}) = {}",
                    op.matrix.get(i, j)
                );
            }
        }
    }

    #[test]
    fn cubic_band_structure() {
        let v = PotentialSpec::parse("1i*x^3").unwrap();
        let op = hermite_discretize(&v, 16, 0.8).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                if (i as isize - j as isize).abs() > 3 {
                    assert!(op.matrix.get(i, j).norm() < 1e-14, "({i},{j}) outside band");
                }
            }
        }
    }

    #[test]
    fn fd_laplacian_spectrum_matches_closed_form() {
        let v = PotentialSpec::new(vec![c(0.0, 0.0), c(1e-300, 0.0)], "0").unwrap();
        // effectively V=0; use the closed-form Dirichlet Laplacian spectrum
        let n = 24;
        let l = 3.0;
        let op = fd_discretize(&v, n, l).unwrap();
        let h = 2.0 * l / (n as f64 + 1.0);
        let mut eig = eigenvalues(&op.matrix).unwrap().values;
        eig.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (k, lam) in eig.iter().enumerate() {
            let expect = 2.0 / (h * h)
                * (1.0 - ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos());
            assert!((lam.re - expect).abs() < 1e-8 * (1.0 + expect), "k={k}");
            assert!(lam.im.abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_small_bases() {
        let v = PotentialSpec::parse("1*x^2").unwrap();
        assert!(matches!(
            hermite_discretize(&v, 3, 1.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            fd_discretize(&v, 7, 4.0),
            Err(Error::InvalidArgument(_))
        ));
    }
}
