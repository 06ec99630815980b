fn main() {
    let r = heytica::envelope::six_atom_witness().unwrap();
    println!("{}", serde_json::to_string_pretty(&r).unwrap());
}
