use ringlab_analyzer::{converged, evaluate, Analyzer, Table, TableGenerator, TableRow};
use ringlab_core::codec::ciphertext_size;
use serde_json::{json, Value};

use crate::args::{config_json, params_json, DfrArgs, Format, NoiseArgs, TableArgs};
use crate::error::Result;
use crate::output::{csv_provenance, emit, finite_or_null, log2_text, prob_json, prob_text, provenance, SECURITY_NOTE};

pub fn table(args: &TableArgs) -> Result<()> {
    let prec = args.precision.get()?;
    let table = TableGenerator::new(prec)?.generate(args.id)?;
    let prov = provenance(
        "analyze table",
        json!({ "id": args.id.number(), "precision_bits": prec.total_bits(), "check_precision_bits": 2 * prec.total_bits() }),
    );
    let text = match args.format {
        Format::Json => table_json(&table, prov),
        Format::Csv => table_csv(&table, &prov),
    };
    emit(args.out.as_deref(), &text)
}

fn row_json(r: &TableRow) -> Value {
    json!({
        "n": r.params.n(),
        "q": r.params.q(),
        "k": r.params.k(),
        "rv": r.rates.v.to_string(),
        "ru": r.rates.u.to_string(),
        "scheme": r.scheme.id(),
        "m": r.scheme.repetitions(),
        "channel_bits": r.scheme.channel_bits(),
        "correctable": r.scheme.correctable(),
        "crossover": prob_json(&r.crossover),
        "crossover_sci": r.crossover.to_sci(5),
        "log2_crossover": finite_or_null(r.log2_crossover),
        "dfr": prob_json(&r.dfr),
        "log2_dfr": finite_or_null(r.log2_dfr),
        "log2_dfr_check": finite_or_null(r.log2_dfr_check),
        "ciphertext_bytes": r.ciphertext_bytes,
        "reduction_percent": (r.reduction_percent * 10.0).round() / 10.0,
    })
}

pub fn table_json(table: &Table, prov: Value) -> String {
    let doc = json!({
        "provenance": prov,
        "table": { "id": table.id.number(), "name": table.id.name(), "title": table.id.title() },
        "note": SECURITY_NOTE,
        "rows": table.rows.iter().map(row_json).collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&doc).expect("json") + "\n"
}

pub fn table_csv(table: &Table, prov: &Value) -> String {
    let mut out = csv_provenance(prov);
    out += &format!("# table {}: {}\n# note: {SECURITY_NOTE}\n", table.id.number(), table.id.title());
    out += "n,q,k,rv,ru,scheme,crossover,log2_crossover,dfr,log2_dfr,log2_dfr_check,ciphertext_bytes,reduction_percent\n";
    for r in &table.rows {
        out += &format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{:.1}\n",
            r.params.n(),
            r.params.q(),
            r.params.k(),
            r.rates.v,
            r.rates.u,
            r.scheme.id(),
            prob_text(&r.crossover),
            log2_text(r.log2_crossover),
            prob_text(&r.dfr),
            log2_text(r.log2_dfr),
            log2_text(r.log2_dfr_check),
            r.ciphertext_bytes,
            r.reduction_percent,
        );
    }
    out
}

pub fn noise(args: &NoiseArgs) -> Result<()> {
    let prec = args.precision.get()?;
    let (params, rates) = args.params.resolve()?;
    let mut analyzer = Analyzer::new(prec);
    let total = analyzer.total_noise(&params, rates)?;
    let diff = analyzer.difference_noise(&params)?;
    let comp = analyzer.compression_noise(params.q(), rates.v)?;
    let mut settings = params_json(&params, rates);
    settings["precision_bits"] = json!(prec.total_bits());
    let mut out = csv_provenance(&provenance("analyze noise", settings));
    out += "value,total_log2,difference_log2,compression_log2\n";
    let h = (params.q() as i64 - 1) / 2;
    for x in -h..=params.q() as i64 - 1 - h {
        out += &format!(
            "{x},{},{},{}\n",
            log2_text(total.weight(x).log2()),
            log2_text(diff.weight(x).log2()),
            log2_text(comp.weight(x).log2())
        );
    }
    emit(args.out.as_deref(), &out)
}

pub fn dfr(args: &DfrArgs) -> Result<()> {
    let prec = args.precision.get()?;
    let cfg = args.scheme.resolve()?;
    let schemes = [cfg.scheme.clone()];
    let work = evaluate(&mut Analyzer::new(prec), &cfg.params, cfg.rates, &schemes)?.remove(0);
    let check = evaluate(&mut Analyzer::new(prec.doubled()?), &cfg.params, cfg.rates, &schemes)?.remove(0);
    let what = format!("n={} {} {}", cfg.params.n(), cfg.rates, cfg.scheme.id());
    let (log2_dfr, log2_dfr_check) = converged(&format!("DFR of {what}"), &work.dfr, &check.dfr)?;
    let (log2_p, _) = converged(&format!("cross-over of {what}"), &work.channel.p, &check.channel.p)?;
    let mut settings = config_json(&cfg);
    settings["precision_bits"] = json!(prec.total_bits());
    let doc = json!({
        "provenance": provenance("analyze dfr", settings),
        "note": SECURITY_NOTE,
        "crossover": prob_json(&work.channel.p),
        "crossover_sci": work.channel.p.to_sci(5),
        "log2_crossover": finite_or_null(log2_p),
        "dfr": prob_json(&work.dfr),
        "log2_dfr": finite_or_null(log2_dfr),
        "log2_dfr_check": finite_or_null(log2_dfr_check),
        "ciphertext_bytes": ciphertext_size(&cfg.params, cfg.rates),
    });
    emit(args.out.as_deref(), &(serde_json::to_string_pretty(&doc).expect("json") + "\n"))
}
