use schurci::group::parse_group;
use schurci::schur::{detect_gwreath, detect_star, is_mq_invariant, p1_q1, trichotomy_classify, SchurPartition};

fn main() -> schurci::Result<()> {
    let h = parse_group("Z2^2xZ3")?;
    // orbits of the automorphism inverting the Z3 factor
    let ring = SchurPartition::from_blocks(
        &h,
        vec![vec![0], vec![1, 2], vec![3], vec![4, 5], vec![6], vec![7, 8], vec![9], vec![10, 11]],
    )?;

    for cert in detect_gwreath(&ring).iter().filter(|c| !c.trivial) {
        let (l, u) = cert.subgroup_orders();
        println!("generalized wreath product over L of order {l}, U of order {u}");
    }

    let (p1, q1) = p1_q1(&ring, 3)?;
    println!("P1 = {:?}, Q1 = {:?}", p1.members(), q1.members());
    match detect_star(&ring, &p1, &q1) {
        Ok(cert) => println!("star product, {} witnessed blocks, verified {}", cert.witnesses.len(), cert.verify(&ring)),
        Err(why) => println!("no star decomposition: {why}"),
    }

    for i in 0..ring.rank() {
        if !is_mq_invariant(&ring, 3, i)? {
            continue;
        }
        match trichotomy_classify(&ring, 3, i) {
            Ok(t) => println!("block {:?}: case {:?}", ring.block(i), t.case),
            Err(e) => println!("block {:?}: {e}", ring.block(i)),
        }
    }
    Ok(())
}
