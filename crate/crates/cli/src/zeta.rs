//! `hyperzeta zeta`: L-polynomials of one curve or a whole family, as a cache.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::Args;
use hyperzeta::algebra::squarefree;
use hyperzeta::ensemble::{enumerate_lpolys, EnsembleSpec, DEFAULT_CURVE_BUDGET};
use hyperzeta::lfunc::{lpoly_from_charsums, verify_lpoly, DEFAULT_POINT_BUDGET};

use crate::cache::{parse_poly, write_cache, CacheHeader};
use crate::{field, CliError, CliResult};

#[derive(Args, Debug, Clone)]
pub struct ZetaArgs {
    pub q: u64,
    pub d: usize,
    /// Digit string of c_0..c_{d-1} (n base-p digits per coefficient, lowest first).
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    pub poly: Option<String>,
    /// Every squarefree monic polynomial of degree d.
    #[arg(long)]
    pub all: bool,
    /// Only c_{d-1} = 0 (needs p not dividing d).
    #[arg(long)]
    pub reduced: bool,
    /// Cross-check every L-polynomial against point counts over extensions.
    #[arg(long)]
    pub verify: bool,
    /// Write the cache here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CURVE_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = DEFAULT_POINT_BUDGET)]
    pub point_budget: u64,
    #[arg(long)]
    pub threads: Option<usize>,
}

pub fn run(args: &ZetaArgs) -> CliResult<String> {
    let ctx = field(args.q)?;
    if args.d == 0 {
        return Err(CliError::usage("d must be at least 1"));
    }
    EnsembleSpec::new(&ctx, args.d, args.reduced)?;
    let entries = match &args.poly {
        Some(spec) => {
            let poly = parse_poly(spec, args.d, &ctx)?;
            if args.reduced && !poly.coeff(args.d - 1).is_zero() {
                return Err(CliError::usage("--reduced needs c_{d-1} = 0"));
            }
            if !squarefree(&poly, &ctx)? {
                return Err(CliError::usage(format!("{poly} is not squarefree")));
            }
            let l = lpoly_from_charsums(&poly, &ctx)?;
            vec![(poly, l)]
        }
        None => enumerate_lpolys(&ctx, args.d, args.reduced, args.budget, args.threads)?,
    };
    if args.verify {
        for (poly, l) in &entries {
            verify_lpoly(l, poly, &ctx, args.point_budget)
                .map_err(|e| CliError::from(e).with_context(&format!("D = {poly}")))?;
        }
    }
    let header = CacheHeader { q: args.q, d: args.d, reduced: args.reduced };
    match &args.out {
        Some(path) => {
            let file = File::create(path)?;
            write_cache(BufWriter::new(file), &header, &entries, &ctx)?;
            Ok(format!("wrote {} records to {}\n", entries.len(), path.display()))
        }
        None => {
            let mut buf = Vec::new();
            write_cache(&mut buf, &header, &entries, &ctx)?;
            Ok(String::from_utf8(buf).expect("ascii cache"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(q: u64, d: usize) -> ZetaArgs {
        ZetaArgs {
            q,
            d,
            poly: None,
            all: true,
            reduced: false,
            verify: false,
            out: None,
            budget: DEFAULT_CURVE_BUDGET,
            point_budget: DEFAULT_POINT_BUDGET,
            threads: Some(1),
        }
    }

    #[test]
    fn family_q3_d3() {
        let out = run(&args(3, 3)).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "#hyperzeta-cache v1 q=3 d=3 reduced=0");
        assert_eq!(lines.len(), 19);
        assert!(lines.contains(&"010:1,0,3"));
    }

    #[test]
    fn single_and_malformed() {
        let mut a = args(3, 3);
        a.all = false;
        a.poly = Some("010".into());
        a.verify = true;
        assert!(run(&a).unwrap().ends_with("010:1,0,3\n"));
        a.poly = Some("01x".into());
        assert_eq!(run(&a).unwrap_err().code, crate::EXIT_USAGE);
        a.poly = Some("000".into());
        assert_eq!(run(&a).unwrap_err().code, crate::EXIT_USAGE);
    }

    #[test]
    fn budget() {
        let mut a = args(3, 5);
        a.budget = 10;
        assert_eq!(run(&a).unwrap_err().code, crate::EXIT_BUDGET);
    }
}
