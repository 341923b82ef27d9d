use ldata::explicit::verify;
use ldata::instances::build_zeta_with_zeros;
use ldata::test_function::make_bump;

fn main() {
    let tf = make_bump(1.0, 0.5, 0.5).unwrap();
    for limit in [None, Some(100)] {
        let t = std::time::Instant::now();
        let z = build_zeta_with_zeros(limit).unwrap();
        let r = verify(&z, &tf).unwrap();
        print!("{}", r.to_key_value());
        println!("elapsed={:?}\n", t.elapsed());
    }
}
