use schurci::group::parse_group;
use schurci::ring::RingElement;

fn main() -> schurci::Result<()> {
    let h = parse_group("Z6")?;
    let units = RingElement::simple_quantity(&h, [1, 5]);
    let evens = RingElement::simple_quantity(&h, [2, 4]);

    let prod = units.multiply(&evens)?;
    println!("{{1,5}} * {{2,4}} = {}", prod.dump());
    println!("{{1,5}}^2 = {}", units.pow(2).dump());
    println!("power map x -> 5x of {{2,4}}: {}", evens.power_map(5).dump());

    let mixed = units.pow(2).add(&evens.scale(3))?;
    println!("element: {}", mixed.dump());
    for m in [2, 3] {
        println!("support of coefficients not divisible by {m}: {:?}", mixed.schur_wielandt_extract(m));
    }
    println!("coefficient 2 at {:?}", mixed.coefficient_class(2));
    Ok(())
}
