//! Text format for rings, monoids and ring maps.
//!
//! ```toml
//! generators = ["1", "t"]        # additive generators
//! orders = [2, 2]                # additive orders, 0 for infinite cyclic
//! unit = "1"                     # linear expression
//! table = [["t", "t", "0"]]      # products a*b = expr; the other order is implied
//! involution = ["1", "t"]        # optional: image of each generator (default identity)
//!
//! [monoid]                       # optional
//! generators = [[1], [-1]]
//! involution = [[-1]]            # optional matrix, rows act on column vectors
//! ```
//!
//! A linear expression is a sum of terms `c*name`, `name`, or a bare integer
//! (a multiple of the unit), joined by `+` and `-`. Products involving the
//! unit may be omitted when the unit is a single generator. A ring map file
//! holds `images = [...]`, one expression in the target per source generator.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;

use super::monoid::AffineMonoid;
use super::ring::{InvolutiveRing, RingHom};
use crate::error::{Error, Result};
use crate::fgab::{FgAbGroup, IntMatrix};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    generators: Option<Vec<String>>,
    orders: Option<Vec<u64>>,
    unit: Option<String>,
    table: Option<Vec<[String; 3]>>,
    involution: Option<Involution>,
    monoid: Option<RawMonoid>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Involution {
    Images(Vec<String>),
    Matrix(Vec<Vec<i64>>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMonoid {
    generators: Vec<Vec<i64>>,
    involution: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHom {
    images: Vec<String>,
}

/// Contents of a spec file: a ring, a monoid, or both.
#[derive(Clone, Debug)]
pub struct SpecFile {
    pub ring: Option<InvolutiveRing>,
    pub monoid: Option<AffineMonoid>,
}

fn spec_err(msg: impl Into<String>) -> Error {
    Error::SpecFile(msg.into())
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| spec_err(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| spec_err(e.to_string()))?;
    let ring = match &raw.generators {
        Some(_) => Some(build_ring(&raw)?),
        None => {
            if raw.orders.is_some() || raw.unit.is_some() || raw.table.is_some() || raw.involution.is_some() {
                return Err(spec_err("ring fields given without `generators`"));
            }
            None
        }
    };
    let monoid = raw.monoid.map(build_monoid).transpose()?;
    if ring.is_none() && monoid.is_none() {
        return Err(spec_err("spec defines neither a ring nor a monoid"));
    }
    Ok(SpecFile { ring, monoid })
}

pub fn parse_ring(text: &str) -> Result<InvolutiveRing> {
    parse_spec(text)?.ring.ok_or_else(|| spec_err("spec does not define a ring"))
}

pub fn parse_monoid(text: &str) -> Result<AffineMonoid> {
    parse_spec(text)?.monoid.ok_or_else(|| spec_err("spec does not define a [monoid] section"))
}

pub fn parse_ring_hom(text: &str, source: &InvolutiveRing, target: &InvolutiveRing) -> Result<RingHom> {
    let raw: RawHom = toml::from_str(text).map_err(|e| spec_err(e.to_string()))?;
    if raw.images.len() != source.n_gens() {
        return Err(spec_err(format!(
            "ring map lists {} images but the source has {} generators",
            raw.images.len(),
            source.n_gens()
        )));
    }
    let cols = raw
        .images
        .iter()
        .map(|e| parse_expression(e, target.names(), Some(target.one())))
        .collect::<Result<Vec<_>>>()?;
    RingHom::new(source.clone(), target.clone(), IntMatrix::from_columns(&cols, target.n_gens()))
}

fn build_ring(raw: &RawSpec) -> Result<InvolutiveRing> {
    let names = raw.generators.clone().unwrap_or_default();
    let n = names.len();
    if n == 0 {
        return Err(spec_err("a ring needs at least one generator"));
    }
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() || name.contains(|c: char| c.is_whitespace() || "+-*".contains(c)) {
            return Err(spec_err(format!("invalid generator name {name:?}")));
        }
        if names[..i].contains(name) {
            return Err(spec_err(format!("duplicate generator name {name:?}")));
        }
    }
    let orders = raw.orders.clone().ok_or_else(|| spec_err("missing `orders`"))?;
    if orders.len() != n {
        return Err(spec_err(format!("`orders` has {} entries for {n} generators", orders.len())));
    }
    let add = FgAbGroup::from_orders(&orders);
    let unit_text = raw.unit.as_deref().ok_or_else(|| spec_err("missing `unit`"))?;
    let one = parse_expression(unit_text, &names, None)?;
    let unit_gen = (0..n).find(|&i| one.iter().enumerate().all(|(j, c)| *c == BigInt::from(u8::from(i == j))));

    let mut table: Vec<Vec<Option<Vec<BigInt>>>> = vec![vec![None; n]; n];
    let mut explicit = vec![vec![false; n]; n];
    for [a, b, e] in raw.table.as_deref().unwrap_or_default() {
        let i = index_of(&names, a)?;
        let j = index_of(&names, b)?;
        if explicit[i][j] {
            return Err(spec_err(format!("product {a}*{b} given twice")));
        }
        let v = parse_expression(e, &names, Some(&one))?;
        explicit[i][j] = true;
        table[i][j] = Some(v.clone());
        if !explicit[j][i] {
            table[j][i] = Some(v);
        }
    }
    if let Some(u) = unit_gen {
        for k in 0..n {
            let ek: Vec<BigInt> = (0..n).map(|j| BigInt::from(u8::from(j == k))).collect();
            if table[u][k].is_none() {
                table[u][k] = Some(ek.clone());
            }
            if table[k][u].is_none() {
                table[k][u] = Some(ek);
            }
        }
    }
    let mut full = Vec::with_capacity(n);
    for (i, row) in table.into_iter().enumerate() {
        let mut r = Vec::with_capacity(n);
        for (j, entry) in row.into_iter().enumerate() {
            r.push(entry.ok_or_else(|| spec_err(format!("product {}*{} is missing from the table", names[i], names[j])))?);
        }
        full.push(r);
    }
    let w = match &raw.involution {
        None => IntMatrix::identity(n),
        Some(Involution::Images(images)) => {
            if images.len() != n {
                return Err(spec_err(format!("`involution` has {} images for {n} generators", images.len())));
            }
            let cols = images.iter().map(|e| parse_expression(e, &names, Some(&one))).collect::<Result<Vec<_>>>()?;
            IntMatrix::from_columns(&cols, n)
        }
        Some(Involution::Matrix(rows)) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(spec_err(format!("`involution` must be a {n}x{n} matrix")));
            }
            // Row i is the image of generator i.
            IntMatrix::from_rows(rows).transpose()
        }
    };
    InvolutiveRing::new(add, names, full, one, w)
}

fn build_monoid(raw: RawMonoid) -> Result<AffineMonoid> {
    let rank = raw.generators.first().map_or(0, Vec::len);
    if raw.generators.iter().any(|g| g.len() != rank) {
        return Err(spec_err("monoid generators have different lengths"));
    }
    let involution = raw
        .involution
        .unwrap_or_else(|| (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect());
    AffineMonoid::new(rank, raw.generators, involution)
}

fn index_of(names: &[String], name: &str) -> Result<usize> {
    names.iter().position(|n| n == name).ok_or_else(|| spec_err(format!("unknown generator {name:?}")))
}

/// Parses a linear expression over the named generators. Bare integers are
/// multiples of `unit`; they are rejected when no unit is available.
pub fn parse_expression(text: &str, names: &[String], unit: Option<&[BigInt]>) -> Result<Vec<BigInt>> {
    let mut out = vec![BigInt::zero(); names.len()];
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(spec_err("empty expression"));
    }
    // Split into signed terms.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    for (k, c) in compact.chars().enumerate() {
        if c == '+' || c == '-' {
            if !cur.is_empty() {
                terms.push((negative, std::mem::take(&mut cur)));
            } else if k > 0 {
                return Err(spec_err(format!("malformed expression {text:?}")));
            }
            negative = c == '-';
        } else {
            cur.push(c);
        }
    }
    if cur.is_empty() {
        return Err(spec_err(format!("malformed expression {text:?}")));
    }
    terms.push((negative, cur));

    for (neg, term) in terms {
        let (coef, atom) = match term.split_once('*') {
            Some((c, a)) => {
                let c: BigInt = c.parse().map_err(|_| spec_err(format!("bad coefficient in {term:?}")))?;
                (c, a.to_string())
            }
            None => (BigInt::from(1), term.clone()),
        };
        let coef = if neg { -coef } else { coef };
        if let Some(i) = names.iter().position(|n| *n == atom) {
            out[i] += coef;
        } else if let Ok(k) = atom.parse::<BigInt>() {
            let unit = unit.ok_or_else(|| spec_err(format!("integer {atom} used where no unit is defined")))?;
            for (o, u) in out.iter_mut().zip(unit) {
                *o += &coef * &k * u;
            }
        } else {
            return Err(spec_err(format!("unknown generator {atom:?} in {text:?}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::bigvec;

    const F2T: &str = r#"
generators = ["1", "t"]
orders = [2, 2]
unit = "1"
table = [["t", "t", "0"]]
"#;

    #[test]
    fn parses_dual_numbers() {
        let r = parse_ring(F2T).unwrap();
        assert_eq!(r.n_gens(), 2);
        assert!(r.additive().elements_equal(&r.mul(&bigvec(&[0, 1]), &bigvec(&[0, 1])), &bigvec(&[0, 0])));
    }

    #[test]
    fn expressions() {
        let names = vec!["1".to_string(), "x".to_string()];
        let one = bigvec(&[1, 0]);
        assert_eq!(parse_expression("x + 1", &names, Some(&one)).unwrap(), bigvec(&[1, 1]));
        assert_eq!(parse_expression("-2*x - 3", &names, Some(&one)).unwrap(), bigvec(&[-3, -2]));
        assert_eq!(parse_expression("0", &names, Some(&one)).unwrap(), bigvec(&[0, 0]));
        assert!(parse_expression("y", &names, Some(&one)).is_err());
        assert!(parse_expression("x ++ 1", &names, Some(&one)).is_err());
        assert!(parse_expression("", &names, Some(&one)).is_err());
    }

    #[test]
    fn gaussian_integers_with_conjugation() {
        let text = r#"
generators = ["1", "i"]
orders = [0, 0]
unit = "1"
table = [["i", "i", "-1"]]
involution = ["1", "-i"]
"#;
        let r = parse_ring(text).unwrap();
        assert!(!r.has_trivial_involution());
    }

    #[test]
    fn missing_product_and_axiom_failures() {
        let text = r#"
generators = ["a", "b"]
orders = [2, 2]
unit = "a + b"
table = [["a", "a", "a"]]
"#;
        assert!(matches!(parse_ring(text), Err(Error::SpecFile(m)) if m.contains("missing")));
        let text = r#"
generators = ["1", "x"]
orders = [2, 2]
unit = "1"
table = [["x", "x", "1 + 1"], ["1", "x", "0"]]
"#;
        assert!(matches!(parse_ring(text), Err(Error::RingAxiom(_))));
        assert!(parse_ring("generators = [\"1\"]").is_err());
        assert!(parse_ring("bogus = 1").is_err());
    }

    #[test]
    fn monoid_section_and_hom() {
        let m = parse_monoid("[monoid]\ngenerators = [[1], [-1]]\ninvolution = [[-1]]\n").unwrap();
        assert_eq!(m, AffineMonoid::integers_sigma());
        let f2 = InvolutiveRing::f2();
        let d = parse_ring(F2T).unwrap();
        assert!(parse_ring_hom("images = [\"1\"]", &f2, &d).is_ok());
        assert!(parse_ring_hom("images = [\"t\"]", &f2, &d).is_err());
    }
}
