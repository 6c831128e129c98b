use trimotion::report::sig17;
use trimotion::superintegrability::degeneracy_scan;

use crate::config::{Format, LoadedConfig};
use crate::failure::{Failure, ResultExt};
use crate::output::Artifacts;

/// Degeneracy scan of a TTW-like template over `k`.
pub fn scan(loaded: &LoadedConfig) -> Result<Artifacts, Failure> {
    let block = loaded
        .config
        .scan
        .as_ref()
        .ok_or_else(|| Failure::config("scan needs a scan block"))?;
    if block.k.is_empty() || block.levels_per_k == 0 {
        return Err(Failure::config("scan needs at least one k and one level"));
    }
    let template = loaded.system()?;
    let result = degeneracy_scan(&template, &block.k, block.levels_per_k, block.tol).classify()?;

    let mut out = Artifacts::new(loaded)?;
    let context = [
        ("family", template.family().to_string()),
        ("levels_per_k", block.levels_per_k.to_string()),
        ("tol", sig17(block.tol)),
    ];
    if loaded.wants(Format::Csv) {
        out.csv(None, &context, &result.to_csv())?;
    }
    if loaded.wants(Format::Json) {
        out.json(Some("summary"), &result.summary())?;
    }
    if loaded.wants(Format::Dat) {
        // one line per k: k_value E_0 E_1 ...
        let mut body = String::from("# k_value");
        for i in 0..block.levels_per_k {
            body.push_str(&format!(" E{i}"));
        }
        body.push('\n');
        for e in &result.entries {
            body.push_str(&sig17(e.k.value()));
            for l in &e.levels {
                body.push(' ');
                body.push_str(&sig17(l.energy));
            }
            body.push('\n');
        }
        out.dat(None, &context, &body)?;
    }
    Ok(out)
}
