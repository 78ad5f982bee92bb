use ringlab_analyzer::{compare, max_abs_z, sample_noise, tv_distance, Analyzer};
use ringlab_core::codec::CompressionRates;
use ringlab_core::ParamSet;
use serde_json::json;

use crate::args::{params_json, MonteCarloArgs};
use crate::error::Result;
use crate::output::{csv_provenance, emit, prob_text, provenance};

pub fn run(args: &MonteCarloArgs) -> Result<()> {
    let prec = args.precision.get()?;
    let params = ParamSet::new(args.n, args.q, args.k)?;
    let rates = CompressionRates::new(args.rv, args.ru);
    rates.validate(&params)?;
    let model = Analyzer::new(prec).total_noise(&params, rates)?;
    let hist = sample_noise(&params, rates, args.coefficients, args.seed)?;
    let rows = compare(&hist, &model)?;
    let mut settings = params_json(&params, rates);
    settings["coefficients"] = json!(args.coefficients);
    settings["seed"] = json!(args.seed);
    settings["precision_bits"] = json!(prec.total_bits());
    let mut out = csv_provenance(&provenance("montecarlo", settings));
    out += &format!("# samples: {}\n# tv_distance: {:.6e}\n# max_abs_z: {:.4}\n", hist.samples, tv_distance(&rows), max_abs_z(&rows));
    out += "value,count,empirical,predicted,z\n";
    for r in &rows {
        out += &format!("{},{},{:.9e},{},{:.4}\n", r.value, r.count, r.empirical, prob_text(&r.predicted), r.z);
    }
    emit(args.out.as_deref(), &out)
}
