use ringlab_analyzer::renyi::{renyi_divergence, to_decimal_string, RENYI_BITS};
use serde_json::json;

use crate::args::RenyiArgs;
use crate::error::{CliError, Result};
use crate::output::{csv_provenance, emit, provenance};

pub fn run(args: &RenyiArgs) -> Result<()> {
    if !(args.a > 1.0) || !args.a.is_finite() {
        return Err(CliError::Usage(format!("order a must be a finite number above 1, got {}", args.a)));
    }
    let settings = json!({ "a": args.a, "k": args.k.0, "digits": args.digits, "working_bits": RENYI_BITS });
    let mut out = csv_provenance(&provenance("renyi", settings));
    out += "k,renyi\n";
    for &k in &args.k.0 {
        out += &format!("{k},{}\n", to_decimal_string(&renyi_divergence(k, args.a)?, args.digits));
    }
    emit(args.out.as_deref(), &out)
}
