use qhflag::qh::QhEngine;
use qhflag::rootsys::RootSystem;

fn main() {
    let rs = RootSystem::new("G2".parse().unwrap()).unwrap();
    for node in 1..=2 {
        let e = QhEngine::new(&rs, node).unwrap();
        println!("{}", e.table.render_text(&format!("QH*(G/P_{node})")));
        for (u, g) in e.giambelli.iter().enumerate() {
            println!("y_{u} = {g}");
        }
        println!("{}\n", e.presentation());
    }
}
