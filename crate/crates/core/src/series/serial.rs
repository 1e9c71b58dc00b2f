//! Line-oriented series records (JSON Lines).
//!
//! The first line is a header `{"vars":[..],"zOrder":K,"wOrder":N,"terms":T}`;
//! each of the following `T` lines is one term
//! `{"z":k,"w":[..],"num":"..","den":".."}`, sorted by `(z, graded-lex w)`.
//! A [`WSeries`] is written as a z-order-0 series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::series::{MultiIndex, Vars, WSeries, ZWSeries};

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    vars: Vec<String>,
    #[serde(rename = "zOrder")]
    z_order: u32,
    #[serde(rename = "wOrder")]
    w_order: u32,
    terms: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct TermRecord {
    z: u32,
    w: Vec<u32>,
    num: String,
    den: String,
}

pub fn write_zw(s: &ZWSeries) -> String {
    let header = Header {
        vars: s.vars().names().to_vec(),
        z_order: s.z_order(),
        w_order: s.w_order(),
        terms: s.num_terms(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for (k, a, c) in s.terms() {
        let rec = TermRecord {
            z: k,
            w: a.exponents().to_vec(),
            num: c.numer().to_string(),
            den: c.denom().to_string(),
        };
        out.push_str(&serde_json::to_string(&rec).expect("term serializes"));
        out.push('\n');
    }
    out
}

pub fn write_w(s: &WSeries) -> String {
    write_zw(&ZWSeries::from_w(s, 0))
}

pub fn read_zw(text: &str) -> Result<ZWSeries> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let first = lines.next().ok_or_else(|| Error::Format("empty input".into()))?;
    let header: Header =
        serde_json::from_str(first).map_err(|e| Error::Format(format!("header: {e}")))?;
    let vars = Vars::new(header.vars);
    let mut terms = Vec::with_capacity(header.terms);
    for (i, line) in lines.enumerate() {
        let rec: TermRecord = serde_json::from_str(line)
            .map_err(|e| Error::Format(format!("term {}: {e}", i + 1)))?;
        if rec.w.len() != vars.len() {
            return Err(Error::Format(format!(
                "term {} has {} exponents for {} variables",
                i + 1,
                rec.w.len(),
                vars.len()
            )));
        }
        let alpha = MultiIndex::from(rec.w);
        if rec.z > header.z_order || alpha.degree() > header.w_order {
            return Err(Error::Format(format!("term {} lies beyond the truncation orders", i + 1)));
        }
        let c: Rat = format!("{}/{}", rec.num, rec.den).parse()?;
        terms.push((rec.z, alpha, c));
    }
    if terms.len() != header.terms {
        return Err(Error::Format(format!(
            "header announces {} terms, found {}",
            header.terms,
            terms.len()
        )));
    }
    Ok(ZWSeries::from_terms(vars, header.z_order, header.w_order, terms))
}

/// Reads a z-order-0 record set back as a w-series.
pub fn read_w(text: &str) -> Result<WSeries> {
    let s = read_zw(text)?;
    if s.z_order() != 0 {
        return Err(Error::Format("expected a w-series (zOrder 0)".into()));
    }
    Ok(s.row(0))
}
