use super::Scalar;
use crate::error::{Error, Result};

/// Fixed-point codec: a real `x` becomes the integer `round(x · 2^frac_bits)`,
/// which must fit in `bits` signed bits, then is embedded in Z_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPoint {
    pub frac_bits: u32,
    pub bits: u32,
}

impl FixedPoint {
    pub fn new(frac_bits: u32, bits: u32) -> Result<Self> {
        if bits == 0 || bits > 63 || frac_bits >= bits + 64 {
            return Err(Error::InvalidParameters(format!(
                "fixed-point width {bits} with {frac_bits} fractional bits"
            )));
        }
        Ok(FixedPoint { frac_bits, bits })
    }

    pub fn scale(&self) -> f64 {
        (self.frac_bits as f64).exp2()
    }

    /// Largest magnitude representable, as an integer.
    pub fn max_int(&self) -> i64 {
        (1i64 << (self.bits - 1)) - 1
    }

    pub fn quantize(&self, x: f64) -> Result<i64> {
        let v = (x * self.scale()).round();
        if !v.is_finite() || v.abs() > self.max_int() as f64 {
            return Err(Error::FixedPointOverflow {
                value: x.to_string(),
                bits: self.bits,
            });
        }
        Ok(v as i64)
    }

    pub fn dequantize(&self, v: i64) -> f64 {
        v as f64 / self.scale()
    }

    pub fn encode(&self, x: f64) -> Result<Scalar> {
        self.quantize(x).map(Scalar::from_i64)
    }

    pub fn decode(&self, s: &Scalar) -> Result<f64> {
        match s.to_i128() {
            Some(v) if v.unsigned_abs() <= self.max_int() as u128 => Ok(self.dequantize(v as i64)),
            _ => Err(Error::FixedPointOverflow {
                value: format!("{s:?}"),
                bits: self.bits,
            }),
        }
    }
}

/// Encodes `x` with `frac_bits` fractional bits into a `bits`-bit signed value.
pub fn encode_fixed(x: f64, frac_bits: u32, bits: u32) -> Result<Scalar> {
    FixedPoint::new(frac_bits, bits)?.encode(x)
}

pub fn decode_fixed(s: &Scalar, frac_bits: u32, bits: u32) -> Result<f64> {
    FixedPoint::new(frac_bits, bits)?.decode(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero() {
        let s = encode_fixed(0.0, 8, 16).unwrap();
        assert_eq!(s, Scalar::ZERO);
        assert_eq!(decode_fixed(&s, 8, 16).unwrap(), 0.0);
    }

    #[test]
    fn one_and_a_half() {
        assert_eq!(encode_fixed(1.5, 8, 16).unwrap(), Scalar::from_u64(384));
    }

    #[test]
    fn negative_maps_to_p_minus() {
        let s = encode_fixed(-1.0, 8, 16).unwrap();
        assert_eq!(s + Scalar::from_u64(256), Scalar::ZERO);
    }

    #[test]
    fn overflow() {
        assert!(encode_fixed(128.0, 8, 16).is_err());
        assert!(encode_fixed(-128.0, 8, 16).is_err());
        assert!(encode_fixed(127.99, 8, 16).is_ok());
        assert!(encode_fixed(f64::NAN, 8, 16).is_err());
        assert!(decode_fixed(&Scalar::from_u64(1 << 20), 8, 16).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn roundtrip_within_quantum(x in -127.99f64..127.99) {
            let fp = FixedPoint::new(8, 16).unwrap();
            let back = fp.decode(&fp.encode(x).unwrap()).unwrap();
            prop_assert!((back - x).abs() <= 0.5 / 256.0 + 1e-12);
        }

        #[test]
        fn out_of_range_errors(x in 128.01f64..1e12, neg in any::<bool>()) {
            let x = if neg { -x } else { x };
            prop_assert!(encode_fixed(x, 8, 16).is_err());
        }
    }
}
