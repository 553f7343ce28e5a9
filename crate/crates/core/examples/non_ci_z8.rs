use schurci::ci::find_non_ci_search;
use schurci::group::parse_group;

fn main() -> schurci::Result<()> {
    for spec in ["Z5", "Z6", "Z8"] {
        let group = parse_group(spec)?;
        let search = find_non_ci_search(&group)?;
        match &search.witness {
            Some(w) => println!(
                "{spec}: witness S = {:?} after {} connection sets; module {}",
                w.connection_set,
                search.connection_sets,
                w.verdict.partition.to_json()
            ),
            None => println!(
                "{spec}: exhausted {} connection sets, {} modules, all CI",
                search.connection_sets, search.modules
            ),
        }
    }
    Ok(())
}
