use std::fmt;
use std::str::FromStr;

use gslice::linalg::ExactField;
use gslice::ring::is_prime;
use gslice::{Fp, Rational};

/// Coefficient ring selected on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldTag {
    Z,
    Q,
    Fp(u32),
}

impl FromStr for FieldTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Z" => Ok(FieldTag::Z),
            "Q" => Ok(FieldTag::Q),
            "F2" => Ok(FieldTag::Fp(2)),
            _ => {
                let p = s
                    .strip_prefix("Fp:")
                    .ok_or_else(|| format!("unknown field `{s}` (expected Z, Q, F2 or Fp:<p>)"))?;
                let p: u64 = p.parse().map_err(|_| format!("bad modulus in `{s}`"))?;
                if p >= 1 << 31 || !is_prime(p as u32) {
                    return Err(format!("{p} is not a prime below 2^31"));
                }
                if !SUPPORTED_PRIMES.contains(&(p as u32)) {
                    return Err(format!(
                        "prime {p} is not compiled in; supported: {}",
                        SUPPORTED_PRIMES.map(|q| q.to_string()).join(", ")
                    ));
                }
                Ok(FieldTag::Fp(p as u32))
            }
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Z => write!(f, "Z"),
            FieldTag::Q => write!(f, "Q"),
            FieldTag::Fp(2) => write!(f, "F2"),
            FieldTag::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// Work that runs over any exact field.
pub trait FieldJob {
    type Output;
    fn run<F: ExactField>(self) -> Self::Output;
}

pub const SUPPORTED_PRIMES: [u32; 18] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 101, 65521, 2147483647];

macro_rules! dispatch_prime {
    ($p:expr, $job:expr, [$($q:literal),*]) => {
        match $p {
            $($q => $job.run::<Fp<$q>>(),)*
            other => unreachable!("prime {other} passed validation but is not compiled in"),
        }
    };
}

/// Runs `job` over the field for `tag`; the integers use the rationals.
pub fn dispatch<J: FieldJob>(tag: FieldTag, job: J) -> J::Output {
    match tag {
        FieldTag::Z | FieldTag::Q => job.run::<Rational>(),
        FieldTag::Fp(p) => dispatch_prime!(
            p,
            job,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 101, 65521, 2147483647]
        ),
    }
}
