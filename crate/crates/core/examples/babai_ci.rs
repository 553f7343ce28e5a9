use schurci::ci::{babai_ci_check, ci_via_star, TheoremOutcome};
use schurci::group::parse_group;
use schurci::schur::SchurPartition;

fn main() -> schurci::Result<()> {
    let z8 = parse_group("Z8")?;
    let module = SchurPartition::from_blocks(&z8, vec![vec![0], vec![2], vec![4], vec![6], vec![1, 5], vec![3, 7]])?;
    let v = babai_ci_check(&module)?;
    println!("Z8 module: {} with {:?} regular subgroups", v.verdict.as_str(), v.regular_subgroup_count);
    if let Some(r) = &v.refusal {
        println!("non-conjugate regular subgroup generated by {:?}", r.regular_subgroup.iter().map(|g| g.to_string()).collect::<Vec<_>>());
    }

    let h = parse_group("Z2^2xZ3")?;
    let ring = SchurPartition::rank_two(&h);
    let v = babai_ci_check(&ring)?;
    println!("rank two over {h}: {}, |Aut| = {}", v.verdict.as_str(), v.automorphism_group_order);

    let discrete = SchurPartition::discrete(&h);
    match ci_via_star(&discrete, &h.q_complement(3)?, &h.q_part(3)?)? {
        TheoremOutcome::Proved { verdict } => println!("discrete ring: {} via {}", verdict.verdict.as_str(), verdict.method.as_str()),
        other => println!("{other:?}"),
    }
    Ok(())
}
