use std::collections::{BTreeMap, BTreeSet};

use mvpa_pdl::tiling::{
    bounded_tiler, build_model, check_grid, check_interior, compile, first_column_worlds, overall, pi, pi_inv,
    snake_prefix, triangle, SnakeVariant, SolutionGrid, TilingSystem,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn cells(size: usize) -> Vec<(usize, usize)> {
    (0..=size).flat_map(|n| (0..=size - n).map(move |m| (n, m))).collect()
}

/// Every total assignment of `tiles` to the triangle of `size`.
fn all_grids(tiles: &[String], size: usize) -> Vec<BTreeMap<(usize, usize), String>> {
    let mut out = vec![BTreeMap::new()];
    for cell in cells(size) {
        out = out
            .into_iter()
            .flat_map(|g| {
                tiles.iter().map(move |t| {
                    let mut g = g.clone();
                    g.insert(cell, t.clone());
                    g
                })
            })
            .collect();
    }
    out
}

fn valid(system: &TilingSystem, g: &BTreeMap<(usize, usize), String>, size: usize) -> bool {
    cells(size).into_iter().all(|(n, m)| {
        let right = g.get(&(n + 1, m)).map_or(true, |t| system.horizontal().contains(&(g[&(n, m)].clone(), t.clone())));
        let up = g.get(&(n, m + 1)).map_or(true, |t| system.vertical().contains(&(g[&(n, m)].clone(), t.clone())));
        right && up
    })
}

fn random_system(rng: &mut StdRng) -> TilingSystem {
    let tiles: Vec<String> = (0..rng.gen_range(1..=3)).map(|i| format!("t{i}")).collect();
    let mut pick = || -> Vec<(String, String)> {
        let mut out = Vec::new();
        for a in &tiles {
            for b in &tiles {
                if rng.gen_bool(0.5) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    };
    let (h, v) = (pick(), pick());
    TilingSystem::new(tiles.clone(), h, v, "t0").unwrap()
}

fn checkerboard() -> TilingSystem {
    TilingSystem::new(["s", "t0"], [("s", "t0"), ("t0", "s")], [("s", "t0"), ("t0", "s")], "t0").unwrap()
}

fn checkerboard_grid(size: usize) -> SolutionGrid {
    let cells = triangle(size)
        .map(|(n, m)| ((n, m), if (n + m) % 2 == 0 { "t0" } else { "s" }.to_string()))
        .collect();
    SolutionGrid::new(size, cells).unwrap()
}

#[test]
fn tiler_agrees_with_exhaustive_search() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..60 {
        let system = random_system(&mut rng);
        for size in 0..=2 {
            for force in [false, true] {
                let grids = all_grids(system.tiles(), size);
                let exists = grids.iter().any(|g| {
                    valid(&system, g, size) && (!force || (0..=size).all(|m| g[&(0, m)] == "t0"))
                });
                let found = bounded_tiler(&system, size, force);
                assert_eq!(found.is_some(), exists, "{system:?} size {size} force {force}");
                if let Some(grid) = found {
                    assert!(valid(&system, grid.cells(), size));
                    assert!(check_grid(&system, &grid).violations.is_empty());
                }
            }
        }
    }
}

#[test]
fn grid_check_counts_every_bad_pair() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..40 {
        let system = random_system(&mut rng);
        let size = rng.gen_range(0..=4);
        let g: BTreeMap<(usize, usize), String> = cells(size)
            .into_iter()
            .map(|c| (c, system.tiles()[rng.gen_range(0..system.tiles().len())].clone()))
            .collect();
        let mut bad = 0;
        for (n, m) in cells(size) {
            if let Some(t) = g.get(&(n + 1, m)) {
                bad += usize::from(!system.horizontal().contains(&(g[&(n, m)].clone(), t.clone())));
            }
            if let Some(t) = g.get(&(n, m + 1)) {
                bad += usize::from(!system.vertical().contains(&(g[&(n, m)].clone(), t.clone())));
            }
        }
        let report = check_grid(&system, &SolutionGrid::new(size, g.clone()).unwrap());
        assert_eq!(report.violations.len(), bad);
        assert_eq!(report.t0_in_column_zero, (0..=size).filter(|&m| g[&(0, m)] == "t0").count());
    }
}

#[test]
fn diagonal_bijection_round_trips() {
    for i in 0..30 {
        for j in 0..=i {
            let (n, m) = pi_inv(i, j).unwrap();
            assert_eq!(pi(n, m), (i, j));
        }
        assert!(pi_inv(i, i + 1).is_err());
    }
}

#[test]
fn model_sizes_follow_the_snake() {
    for r in 0..=6 {
        let model = build_model(&TilingSystem::singleton("t0"), &SolutionGrid::uniform(r, "t0")).unwrap();
        // root, then one world per letter of the first r + 1 blocks
        assert_eq!(model.kripke.world_count(), 1 + (r + 1) * (r + 3), "R = {r}");
        assert_eq!(model.named_worlds().len(), (r + 1) * (r + 2) / 2);
        assert_eq!(model.path_label(), snake_prefix(r + 1).as_slice());
        assert_eq!(model.path().len(), model.kripke.world_count());
        assert_eq!(model.kripke.edges().len(), model.path_label().len());
    }
}

#[test]
fn named_worlds_carry_their_cell_tile() {
    let grid = checkerboard_grid(5);
    let model = build_model(&checkerboard(), &grid).unwrap();
    let k = &model.kripke;
    for (&(i, j), &w) in model.named_worlds() {
        assert_eq!(k.world_name(w), format!("x_{i}_{j}"));
        let (n, m) = pi_inv(i, j).unwrap();
        let tile = grid.get(n, m).unwrap();
        assert_eq!(k.props(w).iter().collect::<Vec<_>>(), [tile]);
        assert_eq!(model.world_of_cell(n, m), Some(w));
        assert_eq!(model.diagonal(w), i);
    }
    for (idx, &w) in model.path().iter().enumerate() {
        if !model.named_worlds().values().any(|&v| v == w) {
            assert_eq!(k.props(w).iter().collect::<Vec<_>>(), ["t0"], "{idx}");
        }
    }
}

#[test]
fn first_column_patterns_cover_the_column_except_the_last_odd_corner() {
    for r in 1..=7 {
        let model = build_model(&TilingSystem::singleton("t0"), &SolutionGrid::uniform(r, "t0")).unwrap();
        let got: BTreeSet<_> = first_column_worlds(&model).into_iter().collect();
        let mut expected: BTreeSet<_> = (0..=r)
            .filter(|&i| i < r || r % 2 == 0)
            .map(|i| model.world_of_cell(0, i).unwrap())
            .collect();
        expected.insert(model.root);
        assert_eq!(got, expected, "R = {r}");
    }
}

#[test]
fn incomplete_or_foreign_grids_are_rejected() {
    let t = checkerboard();
    let mut cells: BTreeMap<_, _> = checkerboard_grid(2).cells().clone();
    cells.insert((0, 0), "zz".into());
    assert!(build_model(&t, &SolutionGrid::new(2, cells).unwrap()).is_err());
    let mut cells: BTreeMap<_, _> = checkerboard_grid(2).cells().clone();
    cells.remove(&(1, 1));
    assert!(SolutionGrid::new(2, cells).is_err());
}

#[test]
fn checkerboard_satisfies_tile_and_matching_clauses() {
    let r = 6;
    let t = checkerboard();
    let phi = compile(&t, SnakeVariant::Star);
    let model = build_model(&t, &checkerboard_grid(r)).unwrap();
    for f in [&phi.tile, &phi.matching] {
        let reports = check_interior(&model, f, 4 * r + 4).unwrap();
        assert!(overall(&reports).holds(), "{reports:?}");
    }
}

#[test]
fn checkerboard_with_a_flipped_cell_fails_matching() {
    let r = 6;
    let t = checkerboard();
    let phi = compile(&t, SnakeVariant::Star);
    let grid = checkerboard_grid(r).with_cell(1, 1, "s").unwrap();
    let model = build_model(&t, &grid).unwrap();
    let reports = check_interior(&model, &phi.matching, 4 * r + 4).unwrap();
    assert!(!overall(&reports).holds());
    let failing: BTreeSet<&str> = reports.iter().flat_map(|c| c.failing.iter().map(String::as_str)).collect();
    // the flipped cell (1,1) itself, its left neighbour (0,1) and its lower neighbour (1,0)
    assert_eq!(failing, BTreeSet::from(["x_2_1", "x_1_1", "x_1_0"]));
}
