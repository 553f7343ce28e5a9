use schurci::bits::BitSet;
use schurci::group::parse_group;
use schurci::schur::{generated_sring, radical, SchurPartition};

fn main() -> schurci::Result<()> {
    let h = parse_group("Z8")?;
    let ring = generated_sring(&h, &[vec![1, 2, 5]]);
    println!("S-ring generated by {{1,2,5}}: {}", ring.to_json());
    println!("rank {}, valid {}", ring.rank(), ring.is_valid());
    for sub in ring.asubgroups() {
        println!("A-subgroup {:?}", sub.members());
    }

    let set = BitSet::from_iter(h.order(), [1, 3, 5, 7]);
    println!("radical of the odd residues: {:?}", radical(&h, &set)?.members());

    let broken = SchurPartition::from_blocks(&h, vec![vec![0], vec![1], vec![2, 3, 4, 5, 6, 7]])?;
    match broken.validate() {
        Ok(()) => println!("valid"),
        Err(v) => println!("not an S-ring: {v}"),
    }
    Ok(())
}
