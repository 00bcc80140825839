//! Line-oriented kernel files with exact rational coefficients.
//!
//! ```text
//! rarita-kernel 1
//! n = 3
//! k = 1
//! kind = Ek
//! normalization = omega_n
//! denom_power = 5
//! c_k = 1/3
//! terms = 2
//! x=1,0,0 u=0,1,0 v=0,0,1 blade=3 coeff=-1/2
//! ...
//! ```
//!
//! `Zk` files omit `x=`, `denom_power` and `c_k`.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::clifford::{Blade, MAX_DIM};
use crate::error::{Error, Result};
use crate::monogenic::KernelZk;
use crate::poly::{MPoly, Monomial, Space};
use crate::radial::RadialRational;
use crate::rarita::KernelEk;
use crate::scalar::{format_rational, parse_rational, Q};

const MAGIC: &str = "rarita-kernel 1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    Zk,
    Ek,
}

impl FromStr for KernelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zk" => Ok(KernelKind::Zk),
            "ek" => Ok(KernelKind::Ek),
            _ => Err(Error::Parse(format!("unknown kernel kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kernel {
    Zk(KernelZk),
    Ek(KernelEk),
}

impl Kernel {
    pub fn kind(&self) -> KernelKind {
        match self {
            Kernel::Zk(_) => KernelKind::Zk,
            Kernel::Ek(_) => KernelKind::Ek,
        }
    }
}

fn exps(m: &Monomial, space: Space, n: usize) -> String {
    m.exponents(space, n).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

pub fn to_text(kernel: &Kernel) -> String {
    let mut out = String::new();
    let (n, k, poly, spaces): (usize, u32, &MPoly<Q>, &[Space]) = match kernel {
        Kernel::Zk(z) => (z.n, z.k, &z.poly, &[Space::U, Space::V]),
        Kernel::Ek(e) => (e.n, e.k, e.f_prime.numerator(), &[Space::X, Space::U, Space::V]),
    };
    let kind = match kernel.kind() {
        KernelKind::Zk => "Zk",
        KernelKind::Ek => "Ek",
    };
    let _ = writeln!(out, "{MAGIC}\nn = {n}\nk = {k}\nkind = {kind}\nnormalization = omega_n");
    if let Kernel::Ek(e) = kernel {
        let _ = writeln!(out, "denom_power = {}\nc_k = {}", e.f_prime.power(), format_rational(&e.c_k));
    }
    let _ = writeln!(out, "terms = {}", poly.len());
    for (m, b, c) in poly.terms() {
        let fields: Vec<String> = spaces.iter().map(|s| format!("{}={}", s.name(), exps(m, *s, n))).collect();
        let _ = writeln!(out, "{} blade={} coeff={}", fields.join(" "), b.0, format_rational(c));
    }
    out
}

fn header<'a>(lines: &mut impl Iterator<Item = &'a str>, key: &str) -> Result<&'a str> {
    let line = lines.next().ok_or_else(|| Error::Parse(format!("missing {key}")))?;
    let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("expected `{key} = ...`")))?;
    if k.trim() != key {
        return Err(Error::Parse(format!("expected {key}, found {:?}", k.trim())));
    }
    Ok(v.trim())
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
}

fn parse_term(line: &str, n: usize, spaces: &[Space]) -> Result<(Monomial, Blade, Q)> {
    let mut mono = Monomial::ONE;
    let mut blade = None;
    let mut coeff = None;
    let mut seen = Vec::new();
    for field in line.split_whitespace() {
        let (key, val) = field.split_once('=').ok_or_else(|| Error::Parse(format!("bad field {field:?}")))?;
        match key {
            "blade" => {
                let b: u16 = parse_num(val, "blade")?;
                if b >> n != 0 {
                    return Err(Error::Parse(format!("blade {b} outside dimension {n}")));
                }
                blade = Some(Blade(b));
            }
            "coeff" => coeff = Some(parse_rational(val)?),
            _ => {
                let space = *spaces
                    .iter()
                    .find(|s| s.name() == key)
                    .ok_or_else(|| Error::Parse(format!("unexpected field {key:?}")))?;
                let es: Vec<u8> = val.split(',').map(|e| parse_num(e, "exponent")).collect::<Result<_>>()?;
                if es.len() != n {
                    return Err(Error::Parse(format!("{key} needs {n} exponents")));
                }
                for (i, e) in es.into_iter().enumerate() {
                    mono.set(space, i, e);
                }
                seen.push(space);
            }
        }
    }
    if seen.len() != spaces.len() {
        return Err(Error::Parse(format!("term {line:?} is missing exponent fields")));
    }
    match (blade, coeff) {
        (Some(b), Some(c)) => Ok((mono, b, c)),
        _ => Err(Error::Parse(format!("term {line:?} needs blade and coeff"))),
    }
}

pub fn from_text(text: &str) -> Result<Kernel> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    if lines.next() != Some(MAGIC) {
        return Err(Error::Parse("not a kernel file".into()));
    }
    let n: usize = parse_num(header(&mut lines, "n")?, "n")?;
    if !(3..=MAX_DIM).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let k: u32 = parse_num(header(&mut lines, "k")?, "k")?;
    let kind: KernelKind = header(&mut lines, "kind")?.parse()?;
    let norm = header(&mut lines, "normalization")?;
    if norm != "omega_n" {
        return Err(Error::Parse(format!("unsupported normalization {norm:?}")));
    }
    let (power, c_k) = match kind {
        KernelKind::Ek => (
            Some(parse_num::<u32>(header(&mut lines, "denom_power")?, "denom_power")?),
            Some(parse_rational(header(&mut lines, "c_k")?)?),
        ),
        KernelKind::Zk => (None, None),
    };
    let count: usize = parse_num(header(&mut lines, "terms")?, "terms")?;
    let spaces: &[Space] = match kind {
        KernelKind::Zk => &[Space::U, Space::V],
        KernelKind::Ek => &[Space::X, Space::U, Space::V],
    };
    let terms: Vec<_> = lines.map(|l| parse_term(l, n, spaces)).collect::<Result<_>>()?;
    if terms.len() != count {
        return Err(Error::Parse(format!("expected {count} terms, found {}", terms.len())));
    }
    let poly = MPoly::from_terms(n, terms);
    Ok(match kind {
        KernelKind::Zk => Kernel::Zk(KernelZk { n, k, poly }),
        KernelKind::Ek => Kernel::Ek(KernelEk {
            n,
            k,
            f_prime: RadialRational::new(poly, Space::X, power.unwrap_or(0), None),
            c_k: c_k.unwrap_or_else(|| Q::from_integer(1.into())),
        }),
    })
}

pub fn save(kernel: &Kernel, path: &Path) -> Result<()> {
    std::fs::write(path, to_text(kernel)).map_err(|e| Error::Other(format!("{}: {e}", path.display())))
}

pub fn load(path: &Path) -> Result<Kernel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Other(format!("{}: {e}", path.display())))?;
    from_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monogenic::build_zk;
    use crate::rarita::build_ek;

    #[test]
    fn zk_round_trip() {
        let z = build_zk(3, 2).unwrap();
        let k = Kernel::Zk((*z).clone());
        assert_eq!(from_text(&to_text(&k)).unwrap(), k);
    }

    #[test]
    fn ek_round_trip() {
        let e = build_ek(&build_zk(3, 1).unwrap()).unwrap();
        let k = Kernel::Ek(e);
        assert_eq!(from_text(&to_text(&k)).unwrap(), k);
    }

    #[test]
    fn trivial_kernel_file() {
        let text = to_text(&Kernel::Zk((*build_zk(3, 0).unwrap()).clone()));
        assert!(text.contains("terms = 1\n"));
        assert!(text.contains("blade=0 coeff=1/1"));
    }

    #[test]
    fn rejects_garbage() {
        assert!(from_text("hello").is_err());
        let text = to_text(&Kernel::Zk((*build_zk(3, 1).unwrap()).clone()));
        assert!(from_text(&text.replace("terms = ", "terms = 9")).is_err());
        assert!(from_text(&text.replace("coeff=", "coeff=x")).is_err());
    }
}
