//! C99 style hexadecimal float text (`0x1.921fb54442d18p+1`).
//!
//! Output is accepted by Python's `float.fromhex` and by `strtod`.

use crate::error::{Error, Result};

const MANTISSA_BITS: u32 = 52;
const EXP_BIAS: i64 = 1023;

pub fn format(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_field = ((bits >> MANTISSA_BITS) & 0x7ff) as i64;
    let mantissa = bits & ((1u64 << MANTISSA_BITS) - 1);
    if exp_field == 0 && mantissa == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_field == 0 {
        (0, 1 - EXP_BIAS)
    } else {
        (1, exp_field - EXP_BIAS)
    };
    let mut digits = format!("{mantissa:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    if digits.is_empty() {
        format!("{sign}0x{lead}p{exp:+}")
    } else {
        format!("{sign}0x{lead}.{digits}p{exp:+}")
    }
}

/// Parses the output of [`format`]. Only the exact-representation subset is
/// accepted: at most 13 fraction digits and a leading digit of 0 or 1.
pub fn parse(text: &str) -> Result<f64> {
    let err = || Error::Parse(format!("invalid hex float '{text}'"));
    let t = text.trim();
    match t {
        "nan" => return Ok(f64::NAN),
        "inf" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    let (negative, rest) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let rest = rest
        .strip_prefix("0x")
        .or_else(|| rest.strip_prefix("0X"))
        .ok_or_else(err)?;
    let (mant_text, exp_text) = rest.split_once(['p', 'P']).ok_or_else(err)?;
    let exp: i64 = exp_text.parse().map_err(|_| err())?;
    let (lead_text, frac_text) = mant_text.split_once('.').unwrap_or((mant_text, ""));
    let lead = match lead_text {
        "0" => 0u64,
        "1" => 1u64,
        _ => return Err(err()),
    };
    if frac_text.len() > 13 {
        return Err(err());
    }
    let mut frac = 0u64;
    for c in frac_text.chars() {
        frac = (frac << 4) | c.to_digit(16).ok_or_else(err)? as u64;
    }
    frac <<= 4 * (13 - frac_text.len()) as u64;

    let bits = if lead == 0 {
        if frac == 0 {
            0
        } else if exp == 1 - EXP_BIAS {
            frac
        } else {
            return Err(err());
        }
    } else {
        let field = exp + EXP_BIAS;
        if !(1..=0x7fe).contains(&field) {
            return Err(err());
        }
        ((field as u64) << MANTISSA_BITS) | frac
    };
    let sign_bit = if negative { 1u64 << 63 } else { 0 };
    Ok(f64::from_bits(bits | sign_bit))
}

pub fn format_slice(xs: &[f64]) -> Vec<String> {
    xs.iter().map(|&x| format(x)).collect()
}

pub fn parse_slice(xs: &[String]) -> Result<Vec<f64>> {
    xs.iter().map(|s| parse(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(format(1.0), "0x1p+0");
        assert_eq!(format(-2.5), "-0x1.4p+1");
        assert_eq!(format(std::f64::consts::PI), "0x1.921fb54442d18p+1");
        assert_eq!(format(0.0), "0x0p+0");
        assert_eq!(format(-0.0), "-0x0p+0");
        assert_eq!(format(f64::from_bits(1)), "0x0.0000000000001p-1022");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("1.5").is_err());
        assert!(parse("0x2.0p+0").is_err());
        assert!(parse("0x1.gp+0").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            let y = parse(&format(x)).unwrap();
            if x.is_nan() {
                prop_assert!(y.is_nan());
            } else {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
