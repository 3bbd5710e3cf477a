//! Reference squares shipped with the crate.
//!
//! Each fixture is also available as a text file under `fixtures/` so the
//! command-line tool can be pointed at it directly.

use crate::generic::GenericSquare;
use crate::square::Square;

pub const FIG1: &str = include_str!("../fixtures/fig1.txt");
pub const FIG2: &str = include_str!("../fixtures/fig2.txt");
pub const FIG3: &str = include_str!("../fixtures/fig3.txt");
pub const FIG4: &str = include_str!("../fixtures/fig4.txt");
pub const FIG8A: &str = include_str!("../fixtures/fig8a.txt");
pub const FIG8B: &str = include_str!("../fixtures/fig8b.txt");
pub const FIG12: &str = include_str!("../fixtures/fig12.txt");
pub const FIG13A: &str = include_str!("../fixtures/fig13a.txt");
pub const FIG13B: &str = include_str!("../fixtures/fig13b.txt");
pub const FIG14L: &str = include_str!("../fixtures/fig14l.txt");
pub const FIG14R: &str = include_str!("../fixtures/fig14r.txt");
pub const FIG19: &str = include_str!("../fixtures/fig19.txt");
pub const FIG20: &str = include_str!("../fixtures/fig20.txt");

/// Every fixture file as `(name, text)`.
pub const ALL: [(&str, &str); 13] = [
    ("fig1", FIG1),
    ("fig2", FIG2),
    ("fig3", FIG3),
    ("fig4", FIG4),
    ("fig8a", FIG8A),
    ("fig8b", FIG8B),
    ("fig12", FIG12),
    ("fig13a", FIG13A),
    ("fig13b", FIG13B),
    ("fig14l", FIG14L),
    ("fig14r", FIG14R),
    ("fig19", FIG19),
    ("fig20", FIG20),
];

fn numeric(text: &str) -> Square {
    text.parse().expect("bundled fixture parses")
}

fn generic(text: &str) -> GenericSquare {
    text.parse().expect("bundled fixture parses")
}

/// 4x4, self-descriptive but trivial (border repeats -4 and omits 1).
pub fn fig1() -> Square {
    numeric(FIG1)
}

/// 4x4 nontrivial square.
pub fn fig2() -> Square {
    numeric(FIG2)
}

/// A rearrangement of [`fig2`].
pub fn fig3() -> Square {
    numeric(FIG3)
}

/// Standard normal form of [`fig2`] and [`fig3`].
pub fn fig4() -> Square {
    numeric(FIG4)
}

/// The first of the two 3x3 squares, in standard normal form.
pub fn fig8a() -> Square {
    numeric(FIG8A)
}

/// The second of the two 3x3 squares, in standard normal form.
pub fn fig8b() -> Square {
    numeric(FIG8B)
}

/// Trivial 2x2 generic square `[x, 2-x; 2-x, x]`.
pub fn fig12() -> GenericSquare {
    generic(FIG12)
}

/// 5x5 generic square in two variables.
pub fn fig13a() -> GenericSquare {
    generic(FIG13A)
}

/// 6x6 generic square in two variables.
pub fn fig13b() -> GenericSquare {
    generic(FIG13B)
}

/// 4x4 numeric square with a `5 / -5` pairing.
pub fn fig14_left() -> Square {
    numeric(FIG14L)
}

/// [`fig14_left`] with `5 -> x` and `-5 -> -x`.
pub fn fig14_right() -> GenericSquare {
    generic(FIG14R)
}

/// 6x6 minimal magic square.
pub fn fig19() -> Square {
    numeric(FIG19)
}

/// 5x5 concentric square.
pub fn fig20() -> Square {
    numeric(FIG20)
}

/// All numeric fixtures by name.
pub fn numeric_fixtures() -> Vec<(&'static str, Square)> {
    vec![
        ("fig1", fig1()),
        ("fig2", fig2()),
        ("fig3", fig3()),
        ("fig4", fig4()),
        ("fig8a", fig8a()),
        ("fig8b", fig8b()),
        ("fig14l", fig14_left()),
        ("fig19", fig19()),
        ("fig20", fig20()),
    ]
}

/// All generic fixtures by name.
pub fn generic_fixtures() -> Vec<(&'static str, GenericSquare)> {
    vec![
        ("fig12", fig12()),
        ("fig13a", fig13a()),
        ("fig13b", fig13b()),
        ("fig14r", fig14_right()),
    ]
}
