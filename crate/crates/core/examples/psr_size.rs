use rayon::prelude::*;
use seisnoise::stat_tests::psr_test_with_tapers;
use seisnoise::synth::{generate, ProcessKind, ProcessSpec};

fn main() {
    for k in [5usize, 8, 10] {
        for j in [8usize, 10, 12] {
            let results: Vec<(bool, bool, bool)> = (0..400u64).into_par_iter().map(|seed| {
                let s = generate(&ProcessSpec { kind: ProcessKind::Gwn { sigma2: 1.0f64 }, n: 50_000, seed: 70_000 + seed }).unwrap();
                let o = psr_test_with_tapers(&s, 15, j, k, 0.05).unwrap();
                (o.t_component.reject_null, o.ir_component.reject_null, o.tir_component.reject_null)
            }).collect();
            let t: u32 = results.iter().map(|r| r.0 as u32).sum();
            let ir: u32 = results.iter().map(|r| r.1 as u32).sum();
            let tir: u32 = results.iter().map(|r| r.2 as u32).sum();
            let any: u32 = results.iter().map(|r| (r.0 || r.1 || r.2) as u32).sum();
            println!("K={k} J={j}: T={t} IR={ir} TIR={tir} union={any}/400 ({:.3})", any as f64 / 400.0);
        }
    }
}
