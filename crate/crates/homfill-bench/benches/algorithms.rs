use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use homfill::builders::{build_grid, build_torus_grid, circuits_through_edge};
use homfill::{enumerate_cycles, enumerate_dn_up_to, smith_normal_form, FillingSolver};
use homfill_bench::{coned_plane, coned_tree, hexagon};

fn smith_forms(c: &mut Criterion) {
    let plane = coned_plane(5);
    let d2 = plane.boundary(2).unwrap().clone();
    c.bench_function("snf/coned_z2_5_d2", |b| {
        b.iter(|| black_box(smith_normal_form(black_box(&d2))))
    });

    let grid = build_grid(4, 4);
    let d1 = grid.boundary(1).unwrap().clone();
    c.bench_function("snf/grid_4x4_d1", |b| {
        b.iter(|| black_box(smith_normal_form(black_box(&d1))))
    });
}

fn filling_solver(c: &mut Criterion) {
    let plane = coned_plane(6);
    let solver = FillingSolver::new(plane.boundary(2).unwrap());
    let gamma = hexagon(&plane, 4);
    c.bench_function("fill/coned_z2_6_hexagon", |b| {
        b.iter(|| black_box(solver.solve(black_box(&gamma), None).unwrap()))
    });

    let torus = build_torus_grid(3);
    let d2 = torus.boundary(2).unwrap();
    let solver = FillingSolver::new(d2);
    let square = d2
        .apply(
            &homfill::Chain::from_labels(torus.basis(2).unwrap(), [("sq(0,0)", 1)]).unwrap(),
        )
        .unwrap();
    c.bench_function("fill/torus_3_square", |b| {
        b.iter(|| black_box(solver.solve(black_box(&square), None).unwrap()))
    });
}

fn enumeration(c: &mut Criterion) {
    let torus = build_torus_grid(2);
    let d1 = torus.boundary(1).unwrap().clone();
    c.bench_function("cycles/torus_2_norm6", |b| {
        b.iter_batched(
            || FillingSolver::new(&d1),
            |solver| black_box(solver.kernel_ball(6).unwrap()),
            BatchSize::SmallInput,
        )
    });
    let _ = enumerate_cycles(&d1, 2).unwrap();

    let grid = build_grid(3, 3);
    let d1 = grid.boundary(1).unwrap().clone();
    c.bench_function("dn/grid_3x3_up_to_5", |b| {
        b.iter(|| black_box(enumerate_dn_up_to(black_box(&d1), 5).unwrap()))
    });
}

fn circuits(c: &mut Criterion) {
    let tree = coned_tree(5);
    let e = tree.basis(1).unwrap().id_of("b(1)").unwrap();
    c.bench_function("circuits/coned_f2_5_len6", |b| {
        b.iter(|| black_box(circuits_through_edge(black_box(&tree), e, 6).unwrap()))
    });
}

criterion_group!(benches, smith_forms, filling_solver, enumeration, circuits);
criterion_main!(benches);
