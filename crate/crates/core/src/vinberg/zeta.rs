use crate::Q;

use super::VinbergError;

// B_{2k} / (2k)! for k = 1..=12.
const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
];

const CUTOFF: u32 = 16;

/// Riemann zeta for real `s > 1` by Euler–Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta is evaluated only for s > 1");
    let n = CUTOFF as f64;
    let mut head = 0.0;
    for k in (1..CUTOFF).rev() {
        head += libm::pow(k as f64, -s);
    }
    let ns = libm::pow(n, -s);
    let mut tail = n * ns / (s - 1.0) + ns / 2.0;
    // s(s+1)...(s+2k-2) N^{-s-2k+1}
    let mut rising = s;
    let mut npow = ns / n;
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = b * rising * npow;
        tail += term;
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        npow /= n * n;
        if libm::fabs(term) < 1e-18 * head {
            break;
        }
    }
    head + tail
}

/// `∏ ζ(r_i + 1)`.
pub fn zeta_product(r: &[Q]) -> Result<f64, VinbergError> {
    let mut prod = 1.0;
    for (index, ri) in r.iter().enumerate() {
        if *ri <= Q::from_integer(0) {
            return Err(VinbergError::ZetaDomain { index, value: *ri + 1 });
        }
        let s = 1.0 + *ri.numer() as f64 / *ri.denom() as f64;
        prod *= zeta(s);
    }
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        libm::fabs(a - b) / libm::fabs(b)
    }

    #[test]
    fn even_values() {
        assert!(rel(zeta(2.0), PI * PI / 6.0) < 1e-13);
        assert!(rel(zeta(4.0), libm::pow(PI, 4.0) / 90.0) < 1e-13);
        assert!(rel(zeta(6.0), libm::pow(PI, 6.0) / 945.0) < 1e-13);
        assert!(rel(zeta(3.0), 1.202_056_903_159_594_3) < 1e-13);
        assert!(rel(zeta(1.5), 2.612_375_348_685_488) < 1e-12);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(zeta_product(&[Q::from_integer(1), Q::from_integer(0)]).is_err());
        let p = zeta_product(&[Q::from_integer(1), Q::from_integer(1), Q::from_integer(3)]).unwrap();
        assert!(libm::fabs(p - 2.928_558_955_577_34) < 1e-12);
    }
}
