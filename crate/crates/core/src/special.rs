//! Complementary error function.
//!
//! Port of the FreeBSD msun `s_erf.c` rational approximations (originally
//! developed at SunPro; the same code underlies Go's `math.Erfc` and musl).
//! Relative accuracy is close to one ulp over the whole range, which is far
//! tighter than the 1e-12 absolute budget the Gaussian tail evaluation needs.

const ERX: f64 = 8.45062911510467529297e-01;

// |x| < 0.84375: erf(x) = x + x*R(x^2), R = P/Q
const PP0: f64 = 1.28379167095512558561e-01;
const PP1: f64 = -3.25042107247001499370e-01;
const PP2: f64 = -2.84817495755985104766e-02;
const PP3: f64 = -5.77027029648944159157e-03;
const PP4: f64 = -2.37630166566501626084e-05;
const QQ1: f64 = 3.97917223959155352819e-01;
const QQ2: f64 = 6.50222499887672944485e-02;
const QQ3: f64 = 5.08130628187576562776e-03;
const QQ4: f64 = 1.32494738004321644526e-04;
const QQ5: f64 = -3.96022827877536812320e-06;

// 0.84375 <= |x| < 1.25: erf(x) = sign(x) * (ERX + P1(s)/Q1(s)), s = |x| - 1
const PA0: f64 = -2.36211856075265944077e-03;
const PA1: f64 = 4.14856118683748331666e-01;
const PA2: f64 = -3.72207876035701323847e-01;
const PA3: f64 = 3.18346619901161753674e-01;
const PA4: f64 = -1.10894694282396677476e-01;
const PA5: f64 = 3.54783043256182359371e-02;
const PA6: f64 = -2.16637559486879084300e-03;
const QA1: f64 = 1.06420880400844228286e-01;
const QA2: f64 = 5.40397917702171048937e-01;
const QA3: f64 = 7.18286544141962662868e-02;
const QA4: f64 = 1.26171219808761642112e-01;
const QA5: f64 = 1.36370839120290507362e-02;
const QA6: f64 = 1.19844998467991074170e-02;

// 1.25 <= |x| < 1/0.35: erfc(x) = exp(-x^2 - 0.5625 + R1/S1) / x
const RA0: f64 = -9.86494403484714822705e-03;
const RA1: f64 = -6.93858572707181764372e-01;
const RA2: f64 = -1.05586262253232909814e+01;
const RA3: f64 = -6.23753324503260060396e+01;
const RA4: f64 = -1.62396669462573470355e+02;
const RA5: f64 = -1.84605092906711035994e+02;
const RA6: f64 = -8.12874355063065934246e+01;
const RA7: f64 = -9.81432934416914548592e+00;
const SA1: f64 = 1.96512716674392571292e+01;
const SA2: f64 = 1.37657754143519042600e+02;
const SA3: f64 = 4.34565877475229228821e+02;
const SA4: f64 = 6.45387271733267880336e+02;
const SA5: f64 = 4.29008140027567833386e+02;
const SA6: f64 = 1.08635005541779435134e+02;
const SA7: f64 = 6.57024977031928170135e+00;
const SA8: f64 = -6.04244152148580987438e-02;

// 1/0.35 <= |x| < 28: erfc(x) = exp(-x^2 - 0.5625 + R2/S2) / x
const RB0: f64 = -9.86494292470009928597e-03;
const RB1: f64 = -7.99283237680523006574e-01;
const RB2: f64 = -1.77579549177547519889e+01;
const RB3: f64 = -1.60636384855821916062e+02;
const RB4: f64 = -6.37566443368389627722e+02;
const RB5: f64 = -1.02509513161107724954e+03;
const RB6: f64 = -4.83519191608651397019e+02;
const SB1: f64 = 3.03380607434824582924e+01;
const SB2: f64 = 3.25792512996573918826e+02;
const SB3: f64 = 1.53672958608443695994e+03;
const SB4: f64 = 3.19985821950859553908e+03;
const SB5: f64 = 2.55305040643316442583e+03;
const SB6: f64 = 4.74528541206955367215e+02;
const SB7: f64 = -2.24409524465858183362e+01;

const TINY: f64 = 1.3877787807814457e-17; // 2^-56

/// Complementary error function `erfc(x) = 1 - erf(x)`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }

    let sign = x < 0.0;
    let x = x.abs();

    if x < 0.84375 {
        let temp = if x < TINY {
            x
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            let y = r / s;
            if x < 0.25 {
                x + x * y
            } else {
                0.5 + (x * y + (x - 0.5))
            }
        };
        return if sign { 1.0 + temp } else { 1.0 - temp };
    }

    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign {
            1.0 + ERX + p / q
        } else {
            1.0 - ERX - p / q
        };
    }

    if x < 28.0 {
        let s = 1.0 / (x * x);
        let (r, q) = if x < 1.0 / 0.35 {
            (
                RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
                1.0 + s
                    * (SA1
                        + s * (SA2
                            + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
            )
        } else {
            if sign && x > 6.0 {
                return 2.0;
            }
            (
                RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
                1.0 + s
                    * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
            )
        };
        // Split x into a high part with zeroed low word so that z*z is exact.
        let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
        let v = (-z * z - 0.5625).exp() * ((z - x) * (z + x) + r / q).exp();
        return if sign { 2.0 - v / x } else { v / x };
    }

    if sign {
        2.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::erfc;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn known_values() {
        assert_eq!(erfc(0.0), 1.0);
        close(erfc(0.5), 0.4795001221869535, 1e-15);
        close(erfc(1.0), 0.15729920705028513, 1e-15);
        close(erfc(2.0), 0.004677734981047265, 1e-16);
        close(erfc(3.0), 2.2090496998585438e-5, 1e-18);
        close(erfc(5.0), 1.5374597944280351e-12, 1e-25);
        close(erfc(-1.0), 1.842700792949715, 1e-14);
        close(erfc(-3.0), 1.9999779095030015, 1e-14);
    }

    #[test]
    fn tail_relative_accuracy() {
        // Mathematica-grade references for the tail branch.
        let refs = [
            (6.0, 2.1519736712498913e-17),
            (8.0, 1.1224297172982928e-29),
            (10.0, 2.0884875837625448e-45),
        ];
        for (x, r) in refs {
            let rel = (erfc(x) - r).abs() / r;
            assert!(rel < 1e-13, "erfc({x}): rel err {rel}");
        }
    }

    #[test]
    fn special_cases() {
        assert!(erfc(f64::NAN).is_nan());
        assert_eq!(erfc(f64::INFINITY), 0.0);
        assert_eq!(erfc(f64::NEG_INFINITY), 2.0);
        assert_eq!(erfc(30.0), 0.0);
        assert_eq!(erfc(-30.0), 2.0);
    }
}
