use schurci::group::parse_group;
use schurci::perm::{aut_scheme, regular_subgroups, transitivity_module, ColorMatrix, PermGroup};
use schurci::schur::SchurPartition;

fn main() -> schurci::Result<()> {
    let h = parse_group("Z2^3")?;
    let ring = SchurPartition::from_blocks(&h, vec![vec![0], vec![1], vec![2, 4, 6], vec![3, 5, 7]])?;
    let matrix = ColorMatrix::from_partition(&ring);
    let aut = aut_scheme(&matrix)?;
    println!("|Aut| = {}, base {:?}, orbit lengths {:?}", aut.order(), aut.base(), aut.basic_orbit_lengths());
    println!("stabilizer of 0 has order {}", aut.stabilizer(0).order());
    println!("transitivity module: {}", transitivity_module(&aut, &h)?.to_json());

    let s4 = PermGroup::symmetric(4);
    for spec in ["Z4", "Z2^2"] {
        let g = parse_group(spec)?;
        println!("{spec}-regular subgroups of Sym(4): {}", regular_subgroups(&s4, &g, 100)?.len());
    }
    Ok(())
}
