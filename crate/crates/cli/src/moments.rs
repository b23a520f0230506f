//! `hyperzeta moments`: exact `M_k(q; d)` over the whole family.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use clap::Args;
use hyperzeta::ensemble::{moments, EnsembleSpec, MomentTable, DEFAULT_CURVE_BUDGET};
use hyperzeta::render::{algebraic_fixed, trim_zeros};

use crate::cache::read_cache;
use crate::table::{Format, Table};
use crate::{field, CliError, CliResult};

/// Where the L-polynomials come from.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Read L-polynomials from a complete cache instead of enumerating.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Enumerate every c_{d-1} even when translation could be used.
    #[arg(long)]
    pub full: bool,
    #[arg(long, default_value_t = DEFAULT_CURVE_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Default for SourceArgs {
    fn default() -> Self {
        SourceArgs { cache: None, full: false, budget: DEFAULT_CURVE_BUDGET, threads: None }
    }
}

#[derive(Args, Debug, Clone)]
pub struct MomentsArgs {
    pub q: u64,
    pub d: usize,
    pub k_max: u32,
    #[command(flatten)]
    pub source: SourceArgs,
    /// Significant digits of the decimal column.
    #[arg(long, default_value_t = 22)]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Exact moment sums for `k = 0..=k_max`.
///
/// When `p ∤ d` the translation `x -> x + u` is used to enumerate only
/// `c_{d-1} = 0`, unless `full` is set.
pub fn exact_table(q: u64, d: usize, k_max: u32, source: &SourceArgs) -> CliResult<MomentTable> {
    let ctx = field(q)?;
    if d == 0 {
        return Err(CliError::usage("d must be at least 1"));
    }
    if let Some(path) = &source.cache {
        let file = read_cache(BufReader::new(File::open(path)?), true)?;
        let h = file.header;
        if h.q != q || h.d != d {
            return Err(CliError::usage(format!(
                "cache is for q = {}, d = {} but q = {q}, d = {d} was requested",
                h.q, h.d
            )));
        }
        let spec = EnsembleSpec::new(&ctx, d, h.reduced)?;
        return Ok(MomentTable::from_lpolys(q, d, k_max, file.lpolys(), spec.multiplier())?);
    }
    let reduced = !source.full && !(d as u64).is_multiple_of(ctx.p());
    Ok(moments(&ctx, d, k_max, reduced, source.budget, source.threads)?)
}

pub fn run(args: &MomentsArgs) -> CliResult<String> {
    if args.digits == 0 {
        return Err(CliError::usage("--digits must be positive"));
    }
    let t = exact_table(args.q, args.d, args.k_max, &args.source)?;
    let mut table = Table::new(&["k", "sum_exact", "M_exact", "M_decimal"]);
    for k in 0..=args.k_max {
        let m = t.moment(k);
        table.push(vec![
            k.to_string(),
            t.sums[k as usize].to_string(),
            m.to_string(),
            trim_zeros(&algebraic_fixed(&m, args.digits)),
        ]);
    }
    Ok(table.render(args.format))
}
