use schurci::group::parse_group;

fn main() -> schurci::Result<()> {
    let h = parse_group("Z2^3xZ3")?;
    println!("{h}: order {}, exponent {}", h.order(), h.exponent());

    let x = h.rank_of(&[1, 0, 1, 2])?;
    let y = h.rank_of(&[1, 1, 0, 1])?;
    let s = h.add(x, y);
    println!("{:?} + {:?} = {:?} (rank {s})", h.exponents(x), h.exponents(y), h.exponents(s));
    println!("order of {:?} is {}", h.exponents(x), h.element_order(x));

    let p = h.q_complement(3)?;
    let q = h.q_part(3)?;
    println!("3-complement has order {}, 3-part has order {}", p.order(), q.order());
    println!("{} subgroups, |Aut(H)| = {}", h.subgroup_lattice()?.len(), h.automorphism_group(100_000)?.len());
    println!("M_3 = {:?}", h.m_q(3)?);
    Ok(())
}
