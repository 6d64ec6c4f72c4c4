//! Double-double arithmetic (~32 significant digits).
//!
//! A value is an unevaluated sum `hi + lo` of two `f64`s with
//! `|lo| <= ulp(hi)/2`. The error-free transformations are the classical
//! two-sum and two-product (Dekker/Knuth); products use FMA when the
//! target provides it, which every platform we build on does via
//! `f64::mul_add`. This is enough precision to certify residuals at
//! 1e-8 with ~24 digits of headroom.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> DD {
        DD { hi: x, lo: 0.0 }
    }

    /// Renormalized construction from an unevaluated pair.
    #[inline]
    fn renorm(hi: f64, lo: f64) -> DD {
        let (s, e) = quick_two_sum(hi, lo);
        DD { hi: s, lo: e }
    }

    #[inline]
    pub fn add(self, o: DD) -> DD {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2b) = quick_two_sum(s1, s2 + t1);
        DD::renorm(s1, s2b + t2)
    }

    #[inline]
    pub fn sub(self, o: DD) -> DD {
        self.add(o.neg())
    }

    #[inline]
    pub fn neg(self) -> DD {
        DD { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn mul(self, o: DD) -> DD {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        DD::renorm(p1, p2)
    }

    #[inline]
    pub fn div(self, o: DD) -> DD {
        // one Newton step on the f64 quotient
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(DD::from_f64(q1)));
        let q2 = r.hi / o.hi;
        DD::renorm(q1, q2)
    }

    #[inline]
    pub fn abs(self) -> DD {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CDD {
    pub re: DD,
    pub im: DD,
}

impl CDD {
    pub const ZERO: CDD = CDD { re: DD::ZERO, im: DD::ZERO };
    pub const ONE: CDD = CDD { re: DD::ONE, im: DD::ZERO };

    #[inline]
    pub fn from_c64(z: Complex64) -> CDD {
        CDD { re: DD::from_f64(z.re), im: DD::from_f64(z.im) }
    }

    #[inline]
    pub fn from_f64(x: f64) -> CDD {
        CDD { re: DD::from_f64(x), im: DD::ZERO }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn add(self, o: CDD) -> CDD {
        CDD { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    #[inline]
    pub fn sub(self, o: CDD) -> CDD {
        CDD { re: self.re.sub(o.re), im: self.im.sub(o.im) }
    }

    #[inline]
    pub fn neg(self) -> CDD {
        CDD { re: self.re.neg(), im: self.im.neg() }
    }

    #[inline]
    pub fn mul(self, o: CDD) -> CDD {
        CDD {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    #[inline]
    pub fn div(self, o: CDD) -> CDD {
        let den = o.re.mul(o.re).add(o.im.mul(o.im));
        let num = self.mul(CDD { re: o.re, im: o.im.neg() });
        CDD { re: num.re.div(den), im: num.im.div(den) }
    }

    /// Integer power, exponent may be negative.
    pub fn powi(self, e: i64) -> CDD {
        if e == 0 {
            return CDD::ONE;
        }
        let mut base = if e < 0 { CDD::ONE.div(self) } else { self };
        let mut k = e.unsigned_abs();
        let mut acc = CDD::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    /// |z| in plain f64, for pivoting and tolerance checks.
    #[inline]
    pub fn norm_f64(self) -> f64 {
        self.to_c64().norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_sums_track_small_residuals() {
        // (1 + 1e-20) - 1 survives in double-double, dies in f64
        let one = DD::from_f64(1.0);
        let eps = DD::from_f64(1e-20);
        let diff = one.add(eps).sub(one);
        assert!((diff.to_f64() - 1e-20).abs() < 1e-32);
    }

    #[test]
    fn dd_division_roundtrips() {
        let a = DD::from_f64(3.0);
        let b = DD::from_f64(7.0);
        let q = a.div(b);
        let back = q.mul(b).sub(a);
        assert!(back.to_f64().abs() < 1e-30);
    }

    #[test]
    fn cdd_powers_match_complex64_at_low_precision() {
        let z = CDD::from_c64(Complex64::new(1.25, -0.5));
        let p = z.powi(5).to_c64();
        let q = Complex64::new(1.25, -0.5).powi(5);
        assert!((p - q).norm() < 1e-12);
        let inv = z.powi(-3).mul(z.powi(3)).to_c64();
        assert!((inv - Complex64::new(1.0, 0.0)).norm() < 1e-25);
    }
}
