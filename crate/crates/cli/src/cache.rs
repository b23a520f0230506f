//! Text cache of L-polynomials.
//!
//! ```text
//! #hyperzeta-cache v1 q=3 d=3 reduced=0
//! 010:1,0,3
//! ```
//!
//! Each record is the digit string of `c_0, ..., c_{d-1}` (every coefficient
//! as `n` base-`p` digits, lowest first; digits above 9 are `a..z`), a colon,
//! and `b(0), ..., b(2g)`.

use std::io::{BufRead, Write};

use hyperzeta::algebra::{FqContext, FqElement, FqPoly};
use hyperzeta::ensemble::EnsembleSpec;
use hyperzeta::lfunc::{genus, LPolynomial};

use crate::{field, CliError, CliResult};

const MAGIC: &str = "#hyperzeta-cache v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CacheHeader {
    pub q: u64,
    pub d: usize,
    pub reduced: bool,
}

impl CacheHeader {
    pub fn line(&self) -> String {
        format!("{MAGIC} q={} d={} reduced={}", self.q, self.d, self.reduced as u8)
    }

    pub fn parse(line: &str) -> CliResult<Self> {
        let rest = line
            .strip_prefix(MAGIC)
            .ok_or_else(|| CliError::usage(format!("not a cache header: {line:?}")))?;
        let (mut q, mut d, mut reduced) = (None, None, None);
        for field in rest.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("bad header field {field:?}")))?;
            let bad = || CliError::usage(format!("bad header value {field:?}"));
            match key {
                "q" => q = Some(value.parse().map_err(|_| bad())?),
                "d" => d = Some(value.parse().map_err(|_| bad())?),
                "reduced" => {
                    reduced = Some(match value {
                        "0" => false,
                        "1" => true,
                        _ => return Err(bad()),
                    })
                }
                _ => return Err(CliError::usage(format!("unknown header field {key:?}"))),
            }
        }
        match (q, d, reduced) {
            (Some(q), Some(d), Some(reduced)) => Ok(CacheHeader { q, d, reduced }),
            _ => Err(CliError::usage("cache header needs q, d and reduced")),
        }
    }

    /// Records in a complete cache: `q^d - q^{d-1}`, divided by `q` when reduced.
    pub fn expected_records(&self, ctx: &FqContext) -> CliResult<u128> {
        let spec = EnsembleSpec::new(ctx, self.d, self.reduced)?;
        let size = spec.family_size();
        let per = size / spec.multiplier();
        per.to_u128().ok_or_else(|| CliError::usage("family too large"))
    }
}

/// Digit string of the lower coefficients of a monic `D`.
pub fn encode_poly(poly: &FqPoly, ctx: &FqContext) -> String {
    let d = poly.degree().unwrap_or(0);
    let mut s = String::with_capacity(d * ctx.n());
    for i in 0..d {
        for digit in ctx.coords(poly.coeff(i)) {
            s.push(char::from_digit(digit as u32, 36).expect("p <= 36"));
        }
    }
    s
}

/// Parses a digit string into the monic polynomial of degree `d` it encodes.
pub fn parse_poly(spec: &str, d: usize, ctx: &FqContext) -> CliResult<FqPoly> {
    if ctx.p() > 36 {
        return Err(CliError::usage("digit strings need p <= 36"));
    }
    let n = ctx.n();
    let chars: Vec<char> = spec.trim().chars().collect();
    if chars.len() != d * n {
        return Err(CliError::usage(format!(
            "D-spec {spec:?} must have {} digits (d = {d}, {n} per coefficient)",
            d * n
        )));
    }
    let mut lower = Vec::with_capacity(d);
    for chunk in chars.chunks(n) {
        let coords = chunk
            .iter()
            .map(|c| c.to_digit(36).map(u64::from).filter(|&v| v < ctx.p()))
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| CliError::usage(format!("D-spec {spec:?} has a digit outside 0..{}", ctx.p())))?;
        lower.push(ctx.from_coords(&coords).map_err(CliError::from)?);
    }
    Ok(FqPoly::monic_from_lower(&lower))
}

pub fn record_line(poly: &FqPoly, l: &LPolynomial, ctx: &FqContext) -> String {
    let b: Vec<String> = l.b.iter().map(|v| v.to_string()).collect();
    format!("{}:{}", encode_poly(poly, ctx), b.join(","))
}

pub fn write_cache<W: Write>(
    mut out: W,
    header: &CacheHeader,
    entries: &[(FqPoly, LPolynomial)],
    ctx: &FqContext,
) -> CliResult<()> {
    writeln!(out, "{}", header.line())?;
    for (poly, l) in entries {
        writeln!(out, "{}", record_line(poly, l, ctx))?;
    }
    Ok(())
}

/// A parsed cache.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheFile {
    pub header: CacheHeader,
    pub entries: Vec<(FqPoly, LPolynomial)>,
}

impl CacheFile {
    pub fn lpolys(&self) -> impl Iterator<Item = &LPolynomial> {
        self.entries.iter().map(|e| &e.1)
    }
}

/// Reads a cache, checking `b(2g - r) = b(r) q^{g-r}` on every record and,
/// when `complete` is set, the record count of the whole family.
pub fn read_cache<R: BufRead>(input: R, complete: bool) -> CliResult<CacheFile> {
    let mut lines = input.lines();
    let header = CacheHeader::parse(&lines.next().ok_or_else(|| CliError::usage("empty cache"))??)?;
    let ctx = field(header.q)?;
    let (g, _) = genus(header.d.max(1));
    let mut entries = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let at = lineno + 2;
        let (digits, bs) = line
            .split_once(':')
            .ok_or_else(|| CliError::usage(format!("line {at}: missing ':'")))?;
        let poly = parse_poly(digits, header.d, &ctx).map_err(|e| CliError::usage(format!("line {at}: {e}")))?;
        let b = bs
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<Vec<i64>, _>>()
            .map_err(|_| CliError::usage(format!("line {at}: bad coefficient list")))?;
        if b.len() != 2 * g + 1 {
            return Err(CliError::usage(format!("line {at}: expected {} coefficients", 2 * g + 1)));
        }
        let l = LPolynomial::from_lower_b(header.q, header.d, &b[..=g])?;
        if l.b != b {
            return Err(CliError::verification(format!(
                "line {at}: coefficients of {poly} violate the functional equation"
            )));
        }
        entries.push((poly, l));
    }
    if complete {
        let want = header.expected_records(&ctx)?;
        if entries.len() as u128 != want {
            return Err(CliError::verification(format!(
                "cache has {} records but the family has {want}",
                entries.len()
            )));
        }
    }
    Ok(CacheFile { header, entries })
}

/// Lower coefficients of a record, for callers that enumerate themselves.
pub fn lower_coeffs(poly: &FqPoly) -> Vec<FqElement> {
    let d = poly.degree().unwrap_or(0);
    (0..d).map(|i| poly.coeff(i)).collect()
}
