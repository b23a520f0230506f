//! `hyperzeta predict`: `Q_k(q; d)` by the signed-shift residue sum.

use clap::Args;
use hyperzeta::akpred::{qk_direct, qk_direct_checked, AKPrediction, PrecisionContext, DEFAULT_TARGET_DIGITS};
use hyperzeta::render::{float_fixed, trim_zeros};

use crate::table::{Format, Table};
use crate::{init_threads, CliError, CliResult};

/// Precision knobs shared by `predict` and `compare`.
#[derive(Args, Debug, Clone, Default)]
pub struct PrecisionArgs {
    /// Working precision in decimal digits (default: sized from the other parameters).
    #[arg(long)]
    pub digits: Option<u32>,
    /// Shift exponent E; shifts are j * 10^-E.
    #[arg(long = "shift-exp")]
    pub shift_exp: Option<u32>,
    /// Keep Euler-product degrees up to N.
    #[arg(long)]
    pub trunc: Option<u32>,
    /// Rerun with E + 5 and fail unless the values agree.
    #[arg(long)]
    pub check: bool,
}

impl PrecisionArgs {
    pub fn context(&self, q: u64, k: u32, target: u32) -> PrecisionContext {
        let base = PrecisionContext::new(q, k, target);
        let e = self.shift_exp.unwrap_or(base.shift_exponent);
        let n = self.trunc.unwrap_or(base.truncation);
        let digits = self
            .digits
            .unwrap_or_else(|| PrecisionContext::required_digits(q, k, e, target, n));
        PrecisionContext { digits, target_digits: target, shift_exponent: e, truncation: n }
    }

    pub fn evaluate(&self, q: u64, d: usize, k: u32, target: u32) -> CliResult<AKPrediction> {
        let ctx = self.context(q, k, target);
        let run = if self.check { qk_direct_checked } else { qk_direct };
        run(q, d, k, &ctx).map_err(|e| CliError::from(e).with_context(&format!("k = {k}")))
    }
}

#[derive(Args, Debug, Clone)]
pub struct PredictArgs {
    pub q: u64,
    pub d: usize,
    pub k_max: u32,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    /// Significant digits required and printed.
    #[arg(long, default_value_t = DEFAULT_TARGET_DIGITS)]
    pub target: u32,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

pub fn run(args: &PredictArgs) -> CliResult<String> {
    if args.k_max == 0 || args.d == 0 || args.target == 0 {
        return Err(CliError::usage("k_max, d and --target must be positive"));
    }
    init_threads(args.threads);
    let mut table = Table::new(&["k", "Q_decimal", "certified_digits"]);
    for k in 1..=args.k_max {
        let p = args.precision.evaluate(args.q, args.d, k, args.target)?;
        table.push(vec![
            k.to_string(),
            trim_zeros(&float_fixed(&p.value, args.target)),
            p.certified_digits.to_string(),
        ]);
    }
    Ok(table.render(args.format))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(q: u64, d: usize, k_max: u32) -> PredictArgs {
        PredictArgs {
            q,
            d,
            k_max,
            precision: PrecisionArgs { shift_exp: Some(20), ..Default::default() },
            target: 22,
            threads: None,
            format: Format::Csv,
        }
    }

    #[test]
    fn q10009_d3_k1() {
        let out = run(&args(10009, 3, 2)).unwrap();
        let rows: Vec<&str> = out.lines().collect();
        assert_eq!(rows[0], "k,Q_decimal,certified_digits");
        assert!(rows[1].starts_with("1,2.00000000000199401202,"), "{}", rows[1]);
    }

    #[test]
    fn too_few_digits() {
        let mut a = args(10009, 3, 2);
        a.precision.digits = Some(30);
        assert_eq!(run(&a).unwrap_err().code, crate::EXIT_PRECISION);
    }

    #[test]
    fn bad_field() {
        assert_eq!(run(&args(12, 3, 1)).unwrap_err().code, crate::EXIT_USAGE);
    }
}
