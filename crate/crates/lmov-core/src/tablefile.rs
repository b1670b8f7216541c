//! Plain-text serialization for tables and product representations.
//!
//! Every file starts with the magic line `lmov-table v1`, followed by
//! `name value` header lines, a `---` separator, and tab-separated
//! `key<TAB>value` body lines. Lines starting with `#` and blank lines
//! are ignored. Writers emit a canonical form: complete key sets in
//! sorted order for value tables, sparse sorted rows for multiplicity
//! tables.
//!
//! Value grammar:
//! - Laurent polynomial: `a,b:c` terms joined by `;`, where `a` and `b`
//!   are the exponents of `s` and `v` and `c` is a rational coefficient;
//!   the zero polynomial is `0`.
//! - Rational function: `numerator / denominator`.
//! - Multiplicity keys: `colors:g:2Q`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::partition::PartitionVector;
use crate::pipeline::{CheckNTable, FTable, FhatTable, NTable, PTable, SmallNTable, WTable, ZTable};
use crate::product::{ProductFactor, ProductRep};
use crate::ratfunc::RatFunc;
use crate::{Int, Rational};

const MAGIC: &str = "lmov-table v1";

/// Errors from reading table files.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected `{MAGIC}`, found `{found}`")]
    Version { line: usize, found: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error("table type is `{found}`, expected `{wanted}`")]
    WrongKind { wanted: &'static str, found: String },
    #[error("{kind} table is missing key `{key}` required by degree {degree}")]
    MissingDegrees {
        kind: &'static str,
        key: String,
        degree: u32,
    },
}

/// A parsed table file: ordered headers and ordered body lines.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TableFile {
    headers: Vec<(String, String)>,
    body: Vec<(String, String)>,
}

impl TableFile {
    /// Parses the generic container format.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut out = TableFile::default();
        let mut seen_magic = false;
        let mut in_body = false;
        let mut seen_keys: BTreeSet<String> = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim_end();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if !seen_magic {
                if trimmed != MAGIC {
                    return Err(ParseError::Version {
                        line,
                        found: trimmed.to_string(),
                    });
                }
                seen_magic = true;
                continue;
            }
            if trimmed == "---" {
                if in_body {
                    return Err(ParseError::Syntax {
                        line,
                        message: "second `---` separator".into(),
                    });
                }
                in_body = true;
                continue;
            }
            if in_body {
                let Some((key, value)) = trimmed.split_once('\t') else {
                    return Err(ParseError::Syntax {
                        line,
                        message: "body line must be `key<TAB>value`".into(),
                    });
                };
                if !seen_keys.insert(key.to_string()) {
                    return Err(ParseError::DuplicateKey {
                        line,
                        key: key.to_string(),
                    });
                }
                out.body.push((key.to_string(), value.to_string()));
            } else {
                let Some((name, value)) = trimmed.split_once(' ') else {
                    return Err(ParseError::Syntax {
                        line,
                        message: "header line must be `name value`".into(),
                    });
                };
                out.headers.push((name.to_string(), value.trim().to_string()));
            }
        }
        if !seen_magic {
            return Err(ParseError::Version {
                line: 1,
                found: String::new(),
            });
        }
        if !in_body {
            return Err(ParseError::Syntax {
                line: text.lines().count() + 1,
                message: "missing `---` separator".into(),
            });
        }
        Ok(out)
    }

    /// Renders the canonical text form.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(MAGIC);
        out.push('\n');
        for (name, value) in &self.headers {
            let _ = writeln!(out, "{name} {value}");
        }
        out.push_str("---\n");
        for (key, value) in &self.body {
            let _ = writeln!(out, "{key}\t{value}");
        }
        out
    }

    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn require_header(&self, name: &'static str) -> Result<&str, ParseError> {
        self.header(name).ok_or(ParseError::MissingHeader(name))
    }

    pub fn push_header(&mut self, name: &str, value: &str) {
        self.headers.push((name.to_string(), value.to_string()));
    }

    pub fn push_body(&mut self, key: &str, value: &str) {
        self.body.push((key.to_string(), value.to_string()));
    }

    pub fn body(&self) -> &[(String, String)] {
        &self.body
    }

    fn expect_kind(&self, wanted: &'static str) -> Result<(), ParseError> {
        let found = self.require_header("type")?;
        if found != wanted {
            return Err(ParseError::WrongKind {
                wanted,
                found: found.to_string(),
            });
        }
        Ok(())
    }

    fn dims(&self) -> Result<(usize, u32), ParseError> {
        let l = parse_header(self, "l")?;
        let degree = parse_header(self, "degree")?;
        Ok((l, degree))
    }
}

fn parse_header<T: std::str::FromStr>(
    file: &TableFile,
    name: &'static str,
) -> Result<T, ParseError> {
    let text = file.require_header(name)?;
    text.parse().map_err(|_| ParseError::Syntax {
        line: 0,
        message: format!("header `{name}`: cannot parse `{text}`"),
    })
}

fn syntax(message: String) -> ParseError {
    ParseError::Syntax { line: 0, message }
}

/// Canonical text of a Laurent polynomial.
pub fn format_laurent(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for ((a, b), c) in p.iter() {
        parts.push(format!("{a},{b}:{c}"));
    }
    parts.join(";")
}

/// Parses the Laurent polynomial grammar.
pub fn parse_laurent(text: &str) -> Result<LaurentPoly, ParseError> {
    let text = text.trim();
    if text == "0" {
        return Ok(LaurentPoly::zero());
    }
    let mut out = LaurentPoly::zero();
    for term in text.split(';') {
        let (exps, coeff) = term
            .split_once(':')
            .ok_or_else(|| syntax(format!("term `{term}` must be `a,b:c`")))?;
        let (a, b) = exps
            .split_once(',')
            .ok_or_else(|| syntax(format!("exponents `{exps}` must be `a,b`")))?;
        let a: i64 = a
            .parse()
            .map_err(|_| syntax(format!("bad exponent `{a}`")))?;
        let b: i64 = b
            .parse()
            .map_err(|_| syntax(format!("bad exponent `{b}`")))?;
        let c: Rational = coeff
            .parse()
            .map_err(|_| syntax(format!("bad coefficient `{coeff}`")))?;
        out.add_term((a, b), c);
    }
    Ok(out)
}

/// Canonical text of a rational function: `numerator / denominator`.
pub fn format_ratfunc(r: &RatFunc) -> String {
    format!(
        "{} / {}",
        format_laurent(r.numerator()),
        format_laurent(r.denominator())
    )
}

/// Parses the rational-function grammar.
pub fn parse_ratfunc(text: &str) -> Result<RatFunc, ParseError> {
    let (num, den) = text
        .split_once(" / ")
        .ok_or_else(|| syntax(format!("value `{text}` must be `num / den`")))?;
    let num = parse_laurent(num)?;
    let den = parse_laurent(den)?;
    RatFunc::new(num, den).map_err(|e| syntax(e.to_string()))
}

fn parse_key(
    text: &str,
    components: usize,
    degree: u32,
) -> Result<PartitionVector, ParseError> {
    let key: PartitionVector = text
        .parse()
        .map_err(|e: String| syntax(format!("key `{text}`: {e}")))?;
    if key.num_components() != components {
        return Err(syntax(format!(
            "key `{text}` has {} components, table declares {components}",
            key.num_components()
        )));
    }
    if key.is_all_empty() || key.total_size() > degree {
        return Err(syntax(format!(
            "key `{text}` is outside degree bound {degree}"
        )));
    }
    Ok(key)
}

fn parse_row_key(
    text: &str,
    components: usize,
    degree: u32,
) -> Result<(PartitionVector, u32, i64), ParseError> {
    let mut fields = text.split(':');
    let (Some(key), Some(g), Some(qq), None) =
        (fields.next(), fields.next(), fields.next(), fields.next())
    else {
        return Err(syntax(format!("key `{text}` must be `colors:g:2Q`")));
    };
    let key = parse_key(key, components, degree)?;
    let g: u32 = g
        .parse()
        .map_err(|_| syntax(format!("bad genus `{g}`")))?;
    let qq: i64 = qq
        .parse()
        .map_err(|_| syntax(format!("bad charge `{qq}`")))?;
    Ok((key, g, qq))
}

/// Writes a colored invariant table with its complete key set.
pub fn write_w_table(w: &WTable, name: &str) -> String {
    let mut file = TableFile::default();
    file.push_header("type", "w");
    file.push_header("name", name);
    file.push_header("l", &w.num_components().to_string());
    file.push_header("degree", &w.degree().to_string());
    for key in w.all_keys() {
        file.push_body(&key.to_string(), &format_ratfunc(&w.get(&key)));
    }
    file.render()
}

/// Reads a colored invariant table, enforcing the complete key set.
pub fn read_w_table(text: &str) -> Result<(WTable, String), ParseError> {
    let file = TableFile::parse(text)?;
    file.expect_kind("w")?;
    let name = file.header("name").unwrap_or("").to_string();
    let (l, degree) = file.dims()?;
    let mut w = WTable::new(l, degree);
    let mut seen = BTreeSet::new();
    for (key, value) in file.body() {
        let key = parse_key(key, l, degree)?;
        let value = parse_ratfunc(value)?;
        seen.insert(key.clone());
        w.set(key, value);
    }
    for key in w.all_keys() {
        if !seen.contains(&key) {
            return Err(ParseError::MissingDegrees {
                kind: "w",
                key: key.to_string(),
                degree,
            });
        }
    }
    Ok((w, name))
}

macro_rules! ratfunc_io {
    ($write_fn:ident, $read_fn:ident, $table:ty, $kind:literal) => {
        /// Writes the nonzero entries in key order.
        pub fn $write_fn(table: &$table) -> String {
            let mut file = TableFile::default();
            file.push_header("type", $kind);
            file.push_header("l", &table.num_components().to_string());
            file.push_header("degree", &table.degree().to_string());
            for (key, value) in table.iter() {
                file.push_body(&key.to_string(), &format_ratfunc(value));
            }
            file.render()
        }

        /// Reads the sparse entries; missing keys stay zero.
        pub fn $read_fn(text: &str) -> Result<$table, ParseError> {
            let file = TableFile::parse(text)?;
            file.expect_kind($kind)?;
            let (l, degree) = file.dims()?;
            let mut table = <$table>::new(l, degree);
            for (key, value) in file.body() {
                let key = parse_key(key, l, degree)?;
                table.set(key, parse_ratfunc(value)?);
            }
            Ok(table)
        }
    };
}

ratfunc_io!(write_z_table, read_z_table, ZTable, "z");
ratfunc_io!(write_f_table, read_f_table, FTable, "f");
ratfunc_io!(write_fhat_table, read_fhat_table, FhatTable, "fhat");
ratfunc_io!(write_p_table, read_p_table, PTable, "p");

macro_rules! multiplicity_io {
    ($write_fn:ident, $read_fn:ident, $table:ty, $kind:literal,
     $fmt:expr, $parse:expr) => {
        /// Writes the sparse multiplicity rows in key order.
        pub fn $write_fn(table: &$table) -> String {
            let mut file = TableFile::default();
            file.push_header("type", $kind);
            file.push_header("l", &table.num_components().to_string());
            file.push_header("degree", &table.degree().to_string());
            for (key, row) in table.iter() {
                for (&(g, qq), value) in row.iter() {
                    #[allow(clippy::redundant_closure_call)]
                    file.push_body(&format!("{key}:{g}:{qq}"), &($fmt)(value));
                }
            }
            file.render()
        }

        /// Reads the sparse multiplicity rows.
        pub fn $read_fn(text: &str) -> Result<$table, ParseError> {
            let file = TableFile::parse(text)?;
            file.expect_kind($kind)?;
            let (l, degree) = file.dims()?;
            let mut table = <$table>::new(l, degree);
            for (key, value) in file.body() {
                let (key, g, qq) = parse_row_key(key, l, degree)?;
                #[allow(clippy::redundant_closure_call)]
                let value = ($parse)(value)?;
                table.row_mut(&key).set(g, qq, value);
            }
            Ok(table)
        }
    };
}

fn parse_int(text: &str) -> Result<Int, ParseError> {
    text.parse()
        .map_err(|_| syntax(format!("bad integer `{text}`")))
}

fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    text.parse()
        .map_err(|_| syntax(format!("bad rational `{text}`")))
}

multiplicity_io!(
    write_n_table,
    read_n_table,
    NTable,
    "n",
    |v: &Int| v.to_string(),
    parse_int
);

multiplicity_io!(
    write_smalln_table,
    read_smalln_table,
    SmallNTable,
    "smalln",
    |v: &Int| v.to_string(),
    parse_int
);

multiplicity_io!(
    write_checkn_table,
    read_checkn_table,
    CheckNTable,
    "checkn",
    |v: &Rational| v.to_string(),
    parse_rational
);

/// Writes a product representation, one factor per body line.
pub fn write_product(rep: &ProductRep) -> String {
    let mut file = TableFile::default();
    file.push_header("type", "product");
    file.push_header("l", &rep.num_components().to_string());
    file.push_header("degree", &rep.degree().to_string());
    for f in rep.factors() {
        file.push_body(
            &format!("{}:{}:{}", f.key, f.genus, f.charge2),
            &f.multiplicity.to_string(),
        );
    }
    file.render()
}

/// Reads a product representation.
pub fn read_product(text: &str) -> Result<ProductRep, ParseError> {
    let file = TableFile::parse(text)?;
    file.expect_kind("product")?;
    let (l, degree) = file.dims()?;
    let mut factors = Vec::new();
    for (key, value) in file.body() {
        let (key, genus, charge2) = parse_row_key(key, l, degree)?;
        let multiplicity = parse_rational(value)?;
        factors.push(ProductFactor {
            key,
            genus,
            charge2,
            multiplicity,
        });
    }
    Ok(ProductRep::from_factors(l, degree, factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{run_pipeline, PConvention};
    use crate::product::{build_product, unknot_table};

    #[test]
    fn laurent_value_roundtrip() {
        let p = LaurentPoly::from_terms([(-1, 2, 1, 2), (0, 0, -3, 1), (4, -1, 7, 5)]);
        let text = format_laurent(&p);
        assert_eq!(text, "-1,2:1/2;0,0:-3;4,-1:7/5");
        assert_eq!(parse_laurent(&text).unwrap(), p);
        assert_eq!(parse_laurent("0").unwrap(), LaurentPoly::zero());
    }

    #[test]
    fn ratfunc_value_roundtrip() {
        let r = RatFunc::new(LaurentPoly::vnum(1), LaurentPoly::qnum(1)).unwrap();
        let text = format_ratfunc(&r);
        assert_eq!(parse_ratfunc(&text).unwrap(), r);
        assert_eq!(format_ratfunc(&RatFunc::zero()), "0 / 0,0:1");
        assert_eq!(parse_ratfunc("0 / 0,0:1").unwrap(), RatFunc::zero());
    }

    #[test]
    fn w_table_byte_exact_roundtrip() {
        let w = unknot_table(2);
        let text = write_w_table(&w, "unknot");
        let (back, name) = read_w_table(&text).unwrap();
        assert_eq!(back, w);
        assert_eq!(name, "unknot");
        assert_eq!(write_w_table(&back, &name), text);
    }

    #[test]
    fn w_table_accepts_comments_and_blanks() {
        let w = unknot_table(1);
        let text = write_w_table(&w, "unknot");
        let with_noise = text.replace(
            "---\n",
            "# a comment\n\n---\n# another\n",
        );
        let (back, _) = read_w_table(&with_noise).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn parse_rejects_bad_magic() {
        assert!(matches!(
            TableFile::parse("not-a-table\n---\n"),
            Err(ParseError::Version { line: 1, .. })
        ));
    }

    #[test]
    fn parse_rejects_duplicate_keys() {
        let text = "lmov-table v1\ntype w\nl 1\ndegree 1\n---\n1\t0 / 0,0:1\n1\t0 / 0,0:1\n";
        assert!(matches!(
            read_w_table(text),
            Err(ParseError::DuplicateKey { line: 7, .. })
        ));
    }

    #[test]
    fn w_table_requires_complete_keys() {
        let text = "lmov-table v1\ntype w\nname x\nl 1\ndegree 2\n---\n1\t0 / 0,0:1\n2\t0 / 0,0:1\n";
        assert!(matches!(
            read_w_table(text),
            Err(ParseError::MissingDegrees { key, .. }) if key == "1,1"
        ));
    }

    #[test]
    fn wrong_kind_is_reported() {
        let w = unknot_table(1);
        let text = write_w_table(&w, "unknot");
        assert!(matches!(
            read_n_table(&text),
            Err(ParseError::WrongKind { wanted: "n", .. })
        ));
    }

    #[test]
    fn multiplicity_tables_roundtrip() {
        let pl = run_pipeline(&unknot_table(2), PConvention::InverseBracketWeights).unwrap();
        let n_text = write_n_table(&pl.n);
        assert_eq!(read_n_table(&n_text).unwrap(), pl.n);
        assert_eq!(write_n_table(&read_n_table(&n_text).unwrap()), n_text);
        let s_text = write_smalln_table(&pl.small_n);
        assert_eq!(read_smalln_table(&s_text).unwrap(), pl.small_n);
        let c_text = write_checkn_table(&pl.check_n);
        assert_eq!(read_checkn_table(&c_text).unwrap(), pl.check_n);
    }

    #[test]
    fn ratfunc_tables_roundtrip() {
        let pl = run_pipeline(&unknot_table(2), PConvention::InverseBracketWeights).unwrap();
        let z_text = write_z_table(&pl.z);
        assert_eq!(read_z_table(&z_text).unwrap(), pl.z);
        let f_text = write_f_table(&pl.f);
        assert_eq!(read_f_table(&f_text).unwrap(), pl.f);
        let fh_text = write_fhat_table(&pl.fhat);
        assert_eq!(read_fhat_table(&fh_text).unwrap(), pl.fhat);
        assert!(fh_text.contains("type fhat\n"));
        let p_text = write_p_table(&pl.p);
        assert_eq!(read_p_table(&p_text).unwrap(), pl.p);
    }

    #[test]
    fn product_roundtrip() {
        let pl = run_pipeline(&unknot_table(2), PConvention::InverseBracketWeights).unwrap();
        let rep = build_product(&pl.check_n, 2).unwrap();
        let text = write_product(&rep);
        assert_eq!(read_product(&text).unwrap(), rep);
        assert!(text.contains("1:0:-1\t1\n"));
    }

    #[test]
    fn header_access() {
        let mut f = TableFile::default();
        f.push_header("type", "w");
        f.push_header("degree", "3");
        assert_eq!(f.header("type"), Some("w"));
        assert_eq!(f.header("missing"), None);
        assert!(matches!(
            f.require_header("l"),
            Err(ParseError::MissingHeader("l"))
        ));
    }
}
