//! Univariate polynomials over the rationals, and exact characteristic /
//! minimal polynomials of square matrices.

use super::{fmt_rat, Rat, TransitionMatrix};
use num::traits::{One, Zero};
use std::fmt;

/// Polynomial with ascending coefficients; no trailing zeros are stored, and
/// the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly {
            coeffs: vec![Rat::zero(), Rat::one()],
        }
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `x - r`.
    pub fn linear(r: Rat) -> Self {
        Poly::from_coeffs(vec![-r, Rat::one()])
    }

    /// `prod (x - r)^m` over the given roots with multiplicities.
    pub fn from_roots(roots: &[(Rat, usize)]) -> Self {
        let mut p = Poly::one();
        for (r, m) in roots {
            let f = Poly::linear(r.clone());
            for _ in 0..*m {
                p = p.mul(&f);
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn mul_scalar(&self, a: &Rat) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * a).collect())
    }

    /// Multiply by `x - r`; cheaper than a general product.
    pub fn mul_linear(&self, r: &Rat) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * r;
        }
        Poly::from_coeffs(out)
    }

    /// Euclidean division: returns `(quotient, remainder)`. Panics on a zero
    /// divisor, which is a programming error here.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead_inv = Rat::one() / divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - d];
        while rem.len() > d && !rem.is_empty() {
            let k = rem.len() - 1 - d;
            let q = rem.last().unwrap() * &lead_inv;
            if !q.is_zero() {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &q * c;
                }
                quot[k] = q;
            }
            rem.pop();
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Least common multiple, monic.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        let (q, r) = self.mul(other).div_rem(&g);
        debug_assert!(r.is_zero());
        q.monic()
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let out = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rat::from_integer((i as i64 + 1).into()))
            .collect();
        Poly::from_coeffs(out)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.mul_scalar(&(Rat::one() / l.clone())),
        }
    }

    /// A polynomial is squarefree iff it is coprime to its derivative.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => true,
            _ => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &Rat) -> usize {
        let lin = Poly::linear(r.clone());
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                return m;
            }
            m += 1;
            p = q;
            if p.is_zero() {
                return m;
            }
        }
    }

    /// All rational roots with multiplicities, by trial division of the
    /// candidate set from the rational root theorem.
    pub fn rational_roots(&self) -> Vec<(Rat, usize)> {
        if self.is_zero() {
            return vec![];
        }
        // clear denominators to get integer coefficients
        let mut den = num::BigInt::one();
        for c in &self.coeffs {
            den = num::integer::lcm(den, c.denom().clone());
        }
        let ints: Vec<num::BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut poly = self.clone();
        let mut roots = vec![];
        // x^k factor first
        let k = ints.iter().take_while(|c| c.is_zero()).count();
        if k > 0 {
            roots.push((Rat::zero(), k));
            poly = Poly::from_coeffs(self.coeffs[k..].to_vec());
        }
        let a0 = ints[k].clone();
        let an = ints.last().unwrap().clone();
        let divisors = |n: &num::BigInt| -> Vec<num::BigInt> {
            let n = n.magnitude().clone();
            let mut out = vec![];
            let mut d = num::BigUint::one();
            while &d * &d <= n {
                if (&n % &d).is_zero() {
                    out.push(num::BigInt::from(d.clone()));
                    out.push(num::BigInt::from(&n / &d));
                }
                d += 1u32;
            }
            out
        };
        let ps = divisors(&a0);
        let qs = divisors(&an);
        let mut candidates = std::collections::BTreeSet::new();
        for p in &ps {
            for q in &qs {
                candidates.insert(Rat::new(p.clone(), q.clone()));
                candidates.insert(Rat::new(-p.clone(), q.clone()));
            }
        }
        for r in candidates {
            let m = poly.root_multiplicity(&r);
            if m > 0 {
                roots.push((r, m));
            }
        }
        roots.sort();
        roots
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = if c < &Rat::zero() { -c.clone() } else { c.clone() };
            if first {
                if c < &Rat::zero() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < &Rat::zero() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag_str = if mag.denom().is_one() {
                mag.numer().to_string()
            } else {
                fmt_rat(&mag)
            };
            match k {
                0 => write!(f, "{mag_str}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag_str}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(xI - A)`, exact.
///
/// The matrix is first brought to upper Hessenberg form by a rational
/// similarity transform (which preserves the characteristic polynomial),
/// then the polynomial is built by the standard three-term recurrence over
/// leading principal minors. Total cost is O(n^3) coefficient operations
/// instead of the O(n^4) of Faddeev-LeVerrier or expansion methods.
pub fn char_poly(mat: &TransitionMatrix) -> Poly {
    let n = mat.dim();
    let mut h: Vec<Vec<Rat>> = (0..n).map(|i| mat.row_dense(i)).collect();

    // similarity reduction to Hessenberg form
    for k in 0..n.saturating_sub(2) {
        let pivot = (k + 1..n).find(|&i| !h[i][k].is_zero());
        let Some(p) = pivot else { continue };
        if p != k + 1 {
            h.swap(p, k + 1);
            for row in h.iter_mut() {
                row.swap(p, k + 1);
            }
        }
        let inv = Rat::one() / h[k + 1][k].clone();
        for i in k + 2..n {
            if h[i][k].is_zero() {
                continue;
            }
            let t = &h[i][k] * &inv;
            // row_i -= t * row_{k+1}; j indexes two rows at once, so stay
            // with explicit indices
            #[allow(clippy::needless_range_loop)]
            for j in k..n {
                let delta = &t * &h[k + 1][j];
                h[i][j] -= delta;
            }
            // col_{k+1} += t * col_i  (completes the similarity)
            for row in h.iter_mut() {
                let delta = &t * &row[i];
                row[k + 1] += delta;
            }
        }
    }

    // p_m = char poly of leading m x m block of the Hessenberg matrix
    let mut p: Vec<Poly> = Vec::with_capacity(n + 1);
    p.push(Poly::one());
    for m in 1..=n {
        let mut pm = p[m - 1].mul_linear(&h[m - 1][m - 1]);
        let mut subdiag = Rat::one();
        for i in (1..m).rev() {
            subdiag *= &h[i][i - 1];
            if subdiag.is_zero() {
                break;
            }
            let c = &h[i - 1][m - 1] * &subdiag;
            if !c.is_zero() {
                pm = pm.sub(&p[i - 1].mul_scalar(&c));
            }
        }
        p.push(pm);
    }
    p.pop().unwrap()
}

/// Minimal polynomial of a square matrix, exact and monic.
///
/// For each basis vector `e_j` not yet annihilated by the running candidate,
/// the minimal annihilator of the Krylov sequence `e_j, A e_j, A^2 e_j, ...`
/// is found by incremental Gaussian elimination with combination tracking,
/// and folded into the candidate by lcm. The lcm over a full basis is the
/// minimal polynomial.
pub fn min_poly(mat: &TransitionMatrix) -> Poly {
    let n = mat.dim();
    if n == 0 {
        return Poly::one();
    }
    let apply = |v: &[Rat]| -> Vec<Rat> {
        // column-vector action w = A v
        let mut w = vec![Rat::zero(); n];
        for (i, wi) in w.iter_mut().enumerate() {
            for (j, a) in mat.row_nonzero(i) {
                if !v[j].is_zero() {
                    *wi += a * &v[j];
                }
            }
        }
        w
    };
    let annihilates = |p: &Poly, e: usize| -> bool {
        // Horner evaluation of p(A) e_j
        let mut acc = vec![Rat::zero(); n];
        for c in p.coeffs().iter().rev() {
            acc = apply(&acc);
            acc[e] += c;
        }
        acc.iter().all(|x| x.is_zero())
    };

    let mut m = Poly::one();
    for j in 0..n {
        if m.degree() == Some(n) {
            break;
        }
        if annihilates(&m, j) {
            continue;
        }
        // echelon rows: (pivot column, vector, combination over powers of A)
        let mut rows: Vec<(usize, Vec<Rat>, Vec<Rat>)> = vec![];
        let mut v = vec![Rat::zero(); n];
        v[j] = Rat::one();
        let mut power = 0usize;
        let ann = loop {
            let mut vec = v.clone();
            let mut combo = vec![Rat::zero(); power + 1];
            combo[power] = Rat::one();
            for (piv, rvec, rcombo) in &rows {
                if vec[*piv].is_zero() {
                    continue;
                }
                let t = vec[*piv].clone() / rvec[*piv].clone();
                for i in 0..n {
                    let d = &t * &rvec[i];
                    vec[i] -= d;
                }
                if rcombo.len() > combo.len() {
                    combo.resize(rcombo.len(), Rat::zero());
                }
                for (i, c) in rcombo.iter().enumerate() {
                    let d = &t * c;
                    combo[i] -= d;
                }
            }
            match vec.iter().position(|x| !x.is_zero()) {
                None => break Poly::from_coeffs(combo),
                Some(piv) => rows.push((piv, vec, combo)),
            }
            v = apply(&v);
            power += 1;
        };
        m = m.lcm(&ann.monic());
    }
    debug_assert!((0..n).all(|j| annihilates(&m, j)));
    m
}
