//! Parallel against sequential execution on the main sweeps.
//!
//! Build with `--no-default-features` to measure the fallback alone; both
//! variants then run sequentially and should time the same.

use std::hint::black_box;

use ciauto::certify::sweep_types;
use ciauto::eigencalc::{sweep_codim_gap, SweepRange};
use ciauto::torelli::{torelli_sweep, TorelliConfig};
use ciauto::varieties::nodes::nodal_ci;
use ciauto::varieties::strata::strata;
use ciauto::varieties::{LinearSubspace, PrimeField};
use ciauto::{birres, CIType, Exec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn eigen(c: &mut Criterion) {
    let range = SweepRange { n_min: 3, n_max: 9, p_max: 7, d_min: 2, d_max: 6 };
    let mut g = c.benchmark_group("codim_gap_sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(sweep_codim_gap(&range, exec))));
    }
    g.finish();
}

fn certify(c: &mut Criterion) {
    let types: Vec<CIType> = CIType::enumerate(3..=8, 3, 4).into_iter().filter(|x| x.dim() >= 2 && !x.is_all_quadric()).collect();
    let mut g = c.benchmark_group("certify_sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(sweep_types(&types, 5, exec))));
    }
    g.finish();
}

fn birres_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("birres_sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(birres::sweep(12, 500, 25, 100, 1, exec))));
    }
    g.finish();
}

fn torelli(c: &mut Criterion) {
    let cfg = TorelliConfig { max_ambient: 5, ..TorelliConfig::default() };
    let mut g = c.benchmark_group("torelli_sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(torelli_sweep(&cfg, exec))));
    }
    g.finish();
}

fn point_enumeration(c: &mut Criterion) {
    let field = PrimeField::new(11).unwrap();
    let x = CIType::new(4, vec![2, 3]).unwrap();
    let forms = nodal_ci(&x, field, 2).unwrap();
    let whole = LinearSubspace::whole(5);
    let mut g = c.benchmark_group("strata_p4_f11");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(strata(field, &forms, &whole, 1 << 20, exec).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, eigen, certify, birres_sweep, torelli, point_enumeration);
criterion_main!(benches);
