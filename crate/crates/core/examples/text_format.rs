//! Reading and writing documents, and what a rejection looks like.

use ribbon_moduli::format::{parse, to_machine, to_text};

fn main() {
    let doc = parse(include_str!("../tests/fixtures/theta.rg")).unwrap();
    print!("{}", to_text(&doc));
    println!("{}", &to_machine(&doc)[..120]);

    let broken = "format ribbon/1\nhalfedges a b\nvertex a b\nvertex b\nedge a b\n";
    let err = parse(broken).unwrap_err();
    println!("line {}, column {}, rule {}: {}", err.line, err.column, err.rule, err.message);
}
