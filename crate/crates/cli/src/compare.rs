//! `hyperzeta compare`: exact moments against predictions, with difference and ratio.

use clap::Args;
use hyperzeta::akpred::DEFAULT_TARGET_DIGITS;
use hyperzeta::render::{algebraic_float, algebraic_fixed, float_fixed, float_to_rational, general_sig, trim_zeros};
use rug::Float;

use crate::moments::{exact_table, SourceArgs};
use crate::predict::PrecisionArgs;
use crate::table::{Format, Table};
use crate::{init_threads, CliError, CliResult};

/// Guard digits for `Q_k` beyond the printed ones.
const Q_GUARD: u32 = 3;
/// Significant digits of the difference column.
const DIFF_DIGITS: u32 = 6;

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    pub q: u64,
    pub d: usize,
    pub k_max: u32,
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    /// Significant digits of the M, Q and ratio columns.
    #[arg(long, default_value_t = DEFAULT_TARGET_DIGITS)]
    pub target: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// One row of the comparison, already rendered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub k: u32,
    pub m_exact: String,
    pub m_decimal: String,
    pub q_decimal: String,
    pub diff: String,
    pub ratio: String,
}

pub fn rows(args: &CompareArgs) -> CliResult<Vec<ComparisonRow>> {
    if args.k_max == 0 || args.target == 0 {
        return Err(CliError::usage("k_max and --target must be positive"));
    }
    init_threads(args.source.threads);
    let exact = exact_table(args.q, args.d, args.k_max, &args.source)?;
    let sig = args.target;
    let mut out = Vec::new();
    for k in 1..=args.k_max {
        let pred = args.precision.evaluate(args.q, args.d, k, sig + Q_GUARD)?;
        let prec = pred.value.prec();
        let m = exact.moment(k);
        let mf = algebraic_float(&m, sig + 2 * Q_GUARD + 20);
        let mf = Float::with_val(prec, &mf);
        let diff = Float::with_val(prec, &mf - &pred.value);
        let ratio = Float::with_val(prec, &mf / &pred.value);
        out.push(ComparisonRow {
            k,
            m_exact: m.to_string(),
            m_decimal: trim_zeros(&algebraic_fixed(&m, sig)),
            q_decimal: trim_zeros(&float_fixed(&pred.value, sig)),
            diff: general_sig(&float_to_rational(&diff), DIFF_DIGITS),
            ratio: trim_zeros(&float_fixed(&ratio, sig)),
        });
    }
    Ok(out)
}

pub fn run(args: &CompareArgs) -> CliResult<String> {
    let rows = rows(args)?;
    if args.format == Format::Tex {
        let mut t = Table::new(&["k", "M", "Q", "difference", "ratio"]);
        for r in rows {
            t.push(vec![r.k.to_string(), r.m_decimal, r.q_decimal, r.diff, r.ratio]);
        }
        let (q, d) = (args.q, args.d);
        let m = format!("$M_k({q},{d})$");
        let qh = format!("$Q_k({q},{d})$");
        return Ok(t.to_tex(Some(&["$k$", &m, &qh, "difference", "ratio"])));
    }
    let mut t = Table::new(&["k", "M_exact", "M_decimal", "Q_decimal", "diff", "ratio"]);
    for r in rows {
        t.push(vec![r.k.to_string(), r.m_exact, r.m_decimal, r.q_decimal, r.diff, r.ratio]);
    }
    Ok(t.render(args.format))
}
