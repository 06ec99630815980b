use heytica::amalgam::{enumerate_sub_amalgams, Diagram};
use heytica::catalog::embeddings_between;
use heytica::{Heyting, UpSet};

fn main() {
    let two = Heyting::two();
    let c3 = Heyting::c3();
    let leg = embeddings_between(&two, &c3).pop().unwrap();
    let d = Diagram::new(two, c3.clone(), c3.clone(), leg.clone(), leg).unwrap();
    let classes = enumerate_sub_amalgams(&d, 20).unwrap();
    println!("independent generated amalgam classes: {}", classes.len());
    for am in &classes {
        println!(
            "  points={} elements={}",
            am.result.dual().n(),
            am.result.size().unwrap()
        );
    }
    // regular-atoms vs host atoms on C3
    let r = heytica::envelope::regular_elements(&c3).unwrap();
    println!("regular atoms of C3: {:?}", r.atoms());
    let host_atoms: Vec<UpSet> = c3
        .elements()
        .unwrap()
        .iter()
        .map(|&u| UpSet(u))
        .filter(|&a| {
            a.0 != 0
                && c3
                    .elements()
                    .unwrap()
                    .iter()
                    .all(|&b| b == 0 || b == a.0 || UpSet(b & a.0) != UpSet(b) || b == a.0)
        })
        .collect();
    println!("host elements: {:?}", c3.elements().unwrap());
    let _ = host_atoms;
}
