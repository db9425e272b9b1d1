//! Straight-line transcriptions of the predictor pseudocode, written without
//! reference to the library's implementation. Division is floor division, as
//! the codec defines it, implemented here from truncating division.

fn floor_div(a: i32, b: i32) -> i32 {
    let q = a / b;
    if a % b != 0 && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn clip(p: i32, max: i32) -> i32 {
    if p < 0 {
        0
    } else if p > max {
        max
    } else {
        p
    }
}

/// Corrected MED on `A`, `B`, `C`.
pub fn med(a: i32, b: i32, c: i32) -> i32 {
    let mx = if a > b { a } else { b };
    let mn = if a < b { a } else { b };
    if c >= mx {
        mx
    } else if c <= mn {
        mn
    } else {
        a + b - c
    }
}

/// GAP over `[W, N, NW, NE, WW, NN, NNE]`.
#[allow(clippy::too_many_arguments)]
pub fn gap(w: i32, n: i32, nw: i32, ne: i32, ww: i32, nn: i32, nne: i32, max: i32) -> i32 {
    let gv = (w - ww).abs() + (n - nw).abs() + (n - ne).abs();
    let gh = (w - nw).abs() + (n - nn).abs() + (ne - nne).abs();
    let p;
    if gv - gh > 80 {
        p = w;
    } else if gv - gh < -80 {
        p = n;
    } else {
        let mut q = floor_div(w + n, 2) + floor_div(ne - nw, 4);
        if gv - gh > 32 {
            q = floor_div(q + w, 2);
        } else if gv - gh > 8 {
            q = floor_div(3 * q + w, 4);
        } else if gv - gh < -32 {
            q = floor_div(q + n, 2);
        } else if gv - gh < -8 {
            q = floor_div(3 * q + n, 4);
        }
        p = q;
    }
    clip(p, max)
}

/// GED with `A = W`, `B = N`, `C = NW`, `D = WW`, `E = NN`.
#[allow(clippy::too_many_arguments)]
pub fn ged(a: i32, b: i32, c: i32, d: i32, e: i32, t: i32, max: i32) -> i32 {
    let gv = (c - a).abs() + (e - b).abs();
    let gh = (d - a).abs() + (c - b).abs();
    let p = if gv - gh > t {
        a
    } else if gv - gh < -t {
        b
    } else {
        // 3(A+B)/8 + (C+D+E)/12 == (9(A+B) + 2(C+D+E)) / 24
        floor_div(9 * (a + b) + 2 * (c + d + e), 24)
    };
    clip(p, max)
}
