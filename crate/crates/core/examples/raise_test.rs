use levelraise_core::level::*;

fn main() {
    let t0 = std::time::Instant::now();
    let data = two_level_data(11, 5, 50).unwrap();
    println!("two_level built in {:?}; edges = {}", t0.elapsed(), data.space.edges.len());
    let forms = rational_eigenforms(&data.labels_k, &data.b_k);
    println!("forms: {}", forms.len());
    let cusp = forms.iter().find(|f| !f.eisenstein).unwrap();
    let star = star_criterion(&data, &cusp.vector, 7).unwrap();
    println!("star mod 7: holds={} m={} n0={:?}", star.holds, star.m, star.n0);
    println!("abelian mod 7: {}", abelian_test(&cusp.values, 11, 7));
    let t1 = std::time::Instant::now();
    let raised = raised_level(&data).unwrap();
    println!("raised level built in {:?}; C = {}", t1.elapsed(), raised.setup.c);
    let split = levelraise_core::congruence::old_new_split(&raised.setup);
    println!("new space dim = {}", split.new_lattice.rows);
    let t2 = std::time::Instant::now();
    match raise_level(&data, &raised, cusp, 7) {
        Ok(systems) => {
            println!("raise_level found {} congruent system(s) in {:?}", systems.len(), t2.elapsed());
            for s in &systems {
                println!("  degree {} multiplicity {}", s.degree, s.multiplicity);
                let vals: Vec<String> = s.labels.iter().zip(s.values.iter())
                    .map(|(r, v)| format!("a_{}={}", r, v[0])).collect();
                println!("  {}", vals.join(" "));
            }
        }
        Err(e) => println!("raise_level error: {e}"),
    }
    // congruence module + cor22 cross-checks
    let facs = levelraise_core::congruence::congruence_module(&raised.setup);
    println!("congruence module invariant factors: {:?}", facs.iter().map(|f| f.to_string()).collect::<Vec<_>>());
    println!("total {:?}", t0.elapsed());
}
