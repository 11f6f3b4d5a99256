//! Builds the three record Goppa codes and prints their exact parameters
//! and weight enumerators.
//!
//! Run with `cargo run --release --example records`.

use std::time::Instant;

use goppa_core::{EnumOptions, FieldSpec, GoppaSpec, Polynomial};

fn main() {
    let field = FieldSpec::new(8, 0x11d).expect("F_256 with the default modulus");
    for text in ["(x^17+1)^6", "(x^16+x)^6", "(x^15+1)^6"] {
        let start = Instant::now();
        let g = Polynomial::parse(&field, text).expect("polynomial parses");
        let spec = GoppaSpec::with_max_support(g).expect("valid Goppa parameters");
        let code = spec.build_code();
        let enumeration = code
            .enumerate(&EnumOptions::default())
            .expect("k is far below the enumeration limit");
        println!(
            "C(L, {text}) = [{}, {}, {}]   ({:.1?})",
            code.n(),
            code.k(),
            enumeration.min_weight.expect("nonzero code"),
            start.elapsed()
        );
        println!("  W(x,y) = {}\n", enumeration.distribution.render_enumerator());
    }
}
