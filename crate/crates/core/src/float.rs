//! Error-free transformations and mod-1 reduction helpers.
//!
//! Positions on the circle are fractional parts of integer combinations of
//! the generators. Those combinations are formed with `two_prod`/`two_sum`
//! so the rounding error stays at a few ulps instead of growing with the
//! size of the coefficients.

/// `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// `a * b = p + e` exactly (requires a hardware or correctly emulated fma).
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Reduces the double-double `hi + lo` into `[0, 1)`.
#[inline]
pub fn frac_dd(hi: f64, lo: f64) -> f64 {
    let hi = hi - hi.floor();
    let x = hi + lo;
    let x = x - x.floor();
    // `x - floor(x)` can round up to exactly 1 for tiny negative x.
    if x >= 1.0 {
        0.0
    } else {
        x
    }
}

/// Fractional part in `[0, 1)`.
#[inline]
pub fn frac(x: f64) -> f64 {
    frac_dd(x, 0.0)
}

/// `frac(n * a)` evaluated with an exact product.
#[inline]
pub fn frac_mul(n: i64, a: f64) -> f64 {
    let (hi, lo) = mul_i64(n, a);
    frac_dd(hi, lo)
}

/// Double-double product of an integer and a float.
///
/// Integers beyond 2^53 are split so the multiplier itself is exact.
#[inline]
fn mul_i64(n: i64, a: f64) -> (f64, f64) {
    const SPLIT: i64 = 1 << 26;
    if n.unsigned_abs() < (1u64 << 53) {
        return two_prod(n as f64, a);
    }
    let high = (n / SPLIT) as f64 * SPLIT as f64;
    let low = (n % SPLIT) as f64;
    let (p1, e1) = two_prod(high, a);
    let p1 = p1 - p1.floor();
    let e1 = e1 - e1.floor();
    let (p2, e2) = two_prod(low, a);
    let (s, e3) = two_sum(p1, p2);
    (s, e1 + e2 + e3)
}

/// `frac(Σ m_j a_j)`, the circle position of lattice point `m`.
pub fn frac_dot(m: &[i64], a: &[f64]) -> f64 {
    debug_assert_eq!(m.len(), a.len());
    let mut hi = 0.0;
    let mut lo = 0.0;
    for (&mj, &aj) in m.iter().zip(a) {
        let (p, pe) = mul_i64(mj, aj);
        // Keep the running sum small; only the fractional part matters.
        let p = p - p.floor();
        let (s, se) = two_sum(hi, p);
        hi = s - s.floor();
        lo += pe + se;
    }
    frac_dd(hi, lo)
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
///
/// `x - round(x)` is exact in floating point, so `dist_to_int(-x)`
/// equals `dist_to_int(x)` bit for bit.
#[inline]
pub fn dist_to_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_sum_is_exact() {
        let (s, e) = two_sum(1.0, 1e-20);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-20);
    }

    #[test]
    fn frac_stays_below_one() {
        assert_eq!(frac(-1e-300), 0.0);
        assert_eq!(frac(2.25), 0.25);
        assert_eq!(frac(-0.25), 0.75);
        assert_eq!(frac_dd(0.0, -1e-30), 0.0);
    }

    #[test]
    fn frac_mul_matches_integer_shift() {
        let a = 0.618_033_988_749_894_9;
        for n in [1i64, 2, 17, 1000, 123_456_789] {
            let direct = frac_mul(n, a);
            let shifted = frac_mul(n + 7, a) - frac_mul(7, a);
            let diff = dist_to_int(direct - shifted);
            assert!(diff < 1e-15, "n={n} diff={diff}");
        }
        assert_eq!(frac_mul(4, 0.25), 0.0);
        assert_eq!(frac_mul(-1, 0.25), 0.75);
    }

    #[test]
    fn huge_multipliers_are_exact_for_dyadic_inputs() {
        let n = (1i64 << 60) + 3;
        assert_eq!(frac_mul(n, 0.5), 0.5);
        assert_eq!(frac_mul(n, 0.25), 0.75);
    }

    #[test]
    fn frac_dot_sums_coordinates() {
        let x = frac_dot(&[1, -2], &[0.25, 0.125]);
        assert_eq!(x, 0.0);
        let y = frac_dot(&[3, 1], &[0.25, 0.5]);
        assert_eq!(y, 0.25);
    }

    #[test]
    fn dist_to_int_is_symmetric() {
        assert_eq!(dist_to_int(0.5), 0.5);
        assert_eq!(dist_to_int(2.25), 0.25);
        assert_eq!(dist_to_int(-2.25), 0.25);
        assert_eq!(dist_to_int(0.75), 0.25);
    }
}
