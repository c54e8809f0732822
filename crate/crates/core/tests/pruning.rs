use tranca::prover::{validate_pruning, Rule, Scope, ValidationScope, Verdict};
use tranca::{Rules, Tile};

fn t(a: u8, b: u8) -> Tile {
    Tile::new(a, b).unwrap()
}

fn check(rule: Rule, scope: ValidationScope) -> tranca::prover::PruningReport {
    let r = validate_pruning(rule, &scope).unwrap();
    println!("{rule} on {}: {} frames, fired {}, on {} off {}", r.scope, r.frames, r.fired, r.verdict_on, r.verdict_off);
    assert!(r.agrees(), "{:?}", r.discrepancies);
    r
}

#[test]
fn p3_on_one_matching() {
    let r = check(
        Rule::P3,
        ValidationScope::Matching {
            connectors: [t(1, 2), t(3, 4), t(5, 6)],
            target: 108,
        },
    );
    assert_eq!(r.verdict_off, Verdict::Unsat);
    let r = check(
        Rule::P3,
        ValidationScope::Matching {
            connectors: [t(1, 2), t(3, 4), t(5, 6)],
            target: 100,
        },
    );
    assert!(r.fired > 0);
}

/// Off a ten-tile board each value other than k keeps five tiles, and a
/// silent losing team misses only four of the eighteen, so P1 never applies.
#[test]
fn p1_is_vacuous_on_ten_tile_frames() {
    let r = check(
        Rule::P1,
        ValidationScope::Matching {
            connectors: [t(1, 6), t(2, 5), t(3, 4)],
            target: 96,
        },
    );
    assert_eq!(r.fired, 0);
}

#[test]
fn p2_on_ten_tile_frames() {
    let r = check(
        Rule::P2,
        ValidationScope::Matching {
            connectors: [t(1, 2), t(3, 4), t(5, 6)],
            target: 100,
        },
    );
    assert!(r.fired > 0);
}

#[test]
fn p2_on_reduced_set() {
    let r = check(
        Rule::P2,
        ValidationScope::Reduced {
            rules: Rules::reduced(3, 2, 5).unwrap(),
        },
    );
    assert_eq!(r.verdict_off, Verdict::Sat);
}

#[test]
fn symmetry_at_107() {
    let r = check(
        Rule::S,
        ValidationScope::Target {
            target: 107,
            scope: Scope::TenTile,
        },
    );
    assert!(r.fired > 0);
    assert_eq!(r.verdict_on, Verdict::Sat);
}

#[test]
fn symmetry_on_reduced_set() {
    let r = check(
        Rule::S,
        ValidationScope::Reduced {
            rules: Rules::reduced(3, 2, 5).unwrap(),
        },
    );
    assert!(r.fired > 0);
}
