//! Deterministic structured output: every float is printed with 17
//! significant digits, so identical inputs and flags produce
//! byte-identical documents.

use quadode_core::algebra::ComplexScalar;
use quadode_core::riccati::RiccatiBranch;
use quadode_core::solver::{PoleWindow, TrajectoryPoint};

pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_pair(z: ComplexScalar) -> String {
    format!("[{}, {}]", fmt_f(z.re), fmt_f(z.im))
}

pub fn fmt_pair_list(zs: &[ComplexScalar]) -> String {
    let inner: Vec<String> = zs.iter().map(|z| fmt_pair(*z)).collect();
    format!("[{}]", inner.join(", "))
}

pub fn fmt_bool(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

pub fn branch_name(b: RiccatiBranch) -> &'static str {
    match b {
        RiccatiBranch::Generic => "generic",
        RiccatiBranch::DoubleRoot => "double_root",
        RiccatiBranch::Linear => "linear",
        RiccatiBranch::Constant => "constant",
    }
}

pub fn fmt_point(p: &TrajectoryPoint) -> String {
    format!("{{\"t\": {}, \"x1\": {}, \"x2\": {}}}", fmt_f(p.t), fmt_pair(p.x1), fmt_pair(p.x2))
}

pub fn fmt_pole_window(w: &PoleWindow) -> String {
    format!(
        "{{\"t_first\": {}, \"t_last\": {}, \"points\": {}}}",
        fmt_f(w.t_first),
        fmt_f(w.t_last),
        w.points
    )
}

/// CSV row for one trajectory point: `t, re_x1, im_x1, re_x2, im_x2`.
pub fn csv_row(p: &TrajectoryPoint) -> String {
    format!(
        "{},{},{},{},{}",
        fmt_f(p.t),
        fmt_f(p.x1.re),
        fmt_f(p.x1.im),
        fmt_f(p.x2.re),
        fmt_f(p.x2.im)
    )
}

pub const CSV_HEADER: &str = "t,re_x1,im_x1,re_x2,im_x2";
