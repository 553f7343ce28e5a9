use std::collections::BTreeMap;

use schurci::catalog::{build_catalog, enumerate_srings, find_alpha, is_p_sring, match_catalog, schurian_check};
use schurci::group::parse_group;

fn main() -> schurci::Result<()> {
    for spec in ["Z5", "Z7", "Z2^2"] {
        println!("{spec}: {} S-rings", enumerate_srings(&parse_group(spec)?)?.len());
    }
    let group = parse_group("Z2^3")?;
    let catalog = build_catalog(2)?;
    let all = enumerate_srings(&group)?;
    let mut labels: BTreeMap<String, usize> = BTreeMap::new();
    let mut schurian = 0;
    for p in &all {
        if !schurian_check(p)? {
            continue;
        }
        schurian += 1;
        if is_p_sring(p, 2) {
            let label = match_catalog(p, &catalog)?.unwrap_or_else(|| "unmatched".into());
            *labels.entry(label).or_default() += 1;
        }
    }
    println!("Z2^3: {} S-rings, {schurian} Schurian", all.len());
    println!("Schurian 2-S-rings by catalog label: {labels:?}");
    for p in [2, 3] {
        let g = parse_group(&format!("Z{p}^3"))?;
        println!("p = {p}: order-p automorphism with p fixed points exists: {}", find_alpha(&g, p)?.is_some());
    }
    Ok(())
}
