//! Number rendering: 12 significant digits, trailing zeros trimmed.

use parrondo_core::Amplitude;

pub const SIG_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits. Plain decimal for exponents in
/// `-5..12`, scientific (`1.5e-7`) outside that window.
pub fn sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    if !(-5..12).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        let tail = tail.trim_end_matches('0');
        return if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        };
    }

    let body = if exp < 0 {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else {
        let point = exp as usize + 1;
        format!("{}.{}", &digits[..point], &digits[point..])
    };
    let body = body.trim_end_matches('0').trim_end_matches('.');
    format!("{sign}{body}")
}

/// `a+bi` or `a-bi`, each part with 12 significant digits.
pub fn complex(z: Amplitude) -> String {
    let im = sig(z.im.abs());
    let op = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{}{op}{im}i", sig(z.re))
}
