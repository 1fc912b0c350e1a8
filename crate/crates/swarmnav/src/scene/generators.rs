//! Scene constructors: four adversarial benchmark scenes with documented
//! dimensions, plus a seeded random-scene generator for property suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Scene, SceneError};
use crate::geometry::{
    convex_hull, m_line_crossings, perimeter_split_fractions, Point, Polygon, Tolerances,
};

/// Thin horizontal wall between start and target.
///
/// The rectangle has width `w` (vertical extent) and length `2l`, centered
/// on the start-target axis. The start sits a hair below the lower long
/// side, the target `d` above the start on the same vertical. The shortest
/// free path rounds one end of the wall: its length is
/// `l + sqrt(d^2 + l^2)` up to a few multiples of `w`.
pub fn gen_long_wall(d: f64, l: f64, w: f64) -> Result<Scene, SceneError> {
    if !(d.is_finite() && l.is_finite() && w.is_finite()) || w <= 0.0 || l <= 0.0 || d <= w {
        return Err(SceneError::InvalidParams(format!(
            "long_wall requires d > w > 0 and l > 0 (got d={d}, l={l}, w={w})"
        )));
    }
    // Offset keeping the start strictly in free space while staying
    // negligible against both the wall width and the free gap above it.
    let e = 1e-3 * w.min(d - w);
    let wall = Polygon::new(vec![
        Point::new(-l, 0.0),
        Point::new(l, 0.0),
        Point::new(l, w),
        Point::new(-l, w),
    ])?;
    let mut scene = Scene::new(
        format!("long_wall_d{d}_l{l}_w{w}"),
        Point::new(0.0, -e),
        Point::new(0.0, d - e),
        vec![wall],
    );
    scene.name = scene.name.replace('.', "p");
    Ok(scene)
}

/// Slab with a narrow blind slit opening toward the start.
///
/// The start sits under the slit mouth, the target above the slab. A unit
/// heading for the target enters the slit and hits its ceiling; boundary
/// walking in either direction frees the direction to the target exactly at
/// a mouth corner, and the departure from either corner re-enters the slit.
/// Under Com-style leave rules every group therefore shuttles between the
/// two mouth corners and the slit ceiling forever, while a full-circuit
/// algorithm escapes around the outside.
///
/// Dimensions are fixed: slab `[-3, 3] x [3.5, 4.5]`, slit `[-0.25, 0.15]`
/// up to `y = 4.25`, start `(0, 0)`, target `(0, 8)`. The slit is offset
/// from center so no arc-length tie can arise between the two directions.
pub fn gen_com_trap() -> Scene {
    let slab = Polygon::new(vec![
        Point::new(-3.0, 3.5),
        Point::new(-0.25, 3.5),
        Point::new(-0.25, 4.25),
        Point::new(0.15, 4.25),
        Point::new(0.15, 3.5),
        Point::new(3.0, 3.5),
        Point::new(3.0, 4.5),
        Point::new(-3.0, 4.5),
    ])
    .expect("fixed trap polygon is valid");
    Scene::new(
        "com_trap",
        Point::new(0.0, 0.0),
        Point::new(0.0, 8.0),
        vec![slab],
    )
}

/// Layout constants for the comb scene, all proportional to the perimeter
/// parameter `p` so the construction scales.
struct CombLayout {
    k: usize,
    /// Straight mouth half-width around the vertical start-target line.
    x_m: f64,
    /// Finger core thickness.
    core: f64,
    /// Horizontal extent of one sawtooth band.
    b_saw: f64,
    /// Tooth pitch and height.
    w_tooth: f64,
    h_tooth: f64,
    teeth: usize,
    /// Inner wall abscissa (walls at +/- w_x).
    w_x: f64,
    wall: f64,
    /// Clearance between the floor / walls and the start point.
    clear: f64,
    /// Core-bottom height of finger 1 and the finger-to-finger pitch.
    y_b1: f64,
    pitch: f64,
    /// Top of the enclosure walls.
    y_top: f64,
}

impl CombLayout {
    fn new(k: usize, p: f64) -> Result<CombLayout, SceneError> {
        if !(p.is_finite() && p > 0.0) || k < 2 || k > 100 {
            return Err(SceneError::InvalidParams(format!(
                "comb requires 2 <= k <= 100 and p > 0 (got k={k}, p={p})"
            )));
        }
        let forced = p / (k as f64 + 1.0); // boundary length each comb forces
        let x_m = 0.0015 * p;
        let core = 0.001 * p;
        let arc = (forced - 2.0 * x_m - core) / 2.0; // sawtooth arc per edge
        // Slope ratio of the tooth flanks: arc = b_saw * sqrt(1 + r^2).
        let r = 7.0_f64;
        let amp = (1.0 + r * r).sqrt();
        let b_saw = arc / amp;
        let w_pref = 0.0003 * p;
        let teeth = (b_saw / w_pref).ceil().max(1.0) as usize;
        let w_tooth = b_saw / teeth as f64;
        let h_tooth = r * w_tooth / 2.0;
        let clear = 0.01 * p;
        let gap = 0.002 * p;
        let w_x = x_m + b_saw + 0.002 * p;
        let y_b1 = clear + h_tooth;
        let pitch = core + 2.0 * h_tooth + gap;
        let y_top = y_b1 + (k as f64 - 1.0) * pitch + core + h_tooth + gap;
        Ok(CombLayout {
            k,
            x_m,
            core,
            b_saw,
            w_tooth,
            h_tooth,
            teeth,
            w_x,
            wall: 0.002 * p,
            clear,
            y_b1,
            pitch,
            y_top,
        })
    }

    fn finger_bottom(&self, j: usize) -> f64 {
        self.y_b1 + (j as f64 - 1.0) * self.pitch
    }
}

/// Smallest start-target distance that can host a `k`-comb scene with
/// perimeter parameter `p`.
pub fn comb_min_distance(k: usize, p: f64) -> Result<f64, SceneError> {
    let lay = CombLayout::new(k, p)?;
    Ok(lay.y_top + lay.clear)
}

/// Emits one sawtooth band walking right from `(x0, y)` to
/// `(x0 + b_saw, y)`, with teeth dipping to `y + dir * h_tooth`.
fn sawtooth_right(out: &mut Vec<Point>, lay: &CombLayout, x0: f64, y: f64, dir: f64) {
    for i in 0..lay.teeth {
        let x_lo = x0 + i as f64 * lay.w_tooth;
        out.push(Point::new(x_lo + lay.w_tooth / 2.0, y + dir * lay.h_tooth));
        out.push(Point::new(x_lo + lay.w_tooth, y));
    }
}

/// Mirror of [`sawtooth_right`], walking left from `(x1, y)`.
fn sawtooth_left(out: &mut Vec<Point>, lay: &CombLayout, x1: f64, y: f64, dir: f64) {
    for i in 0..lay.teeth {
        let x_hi = x1 - i as f64 * lay.w_tooth;
        out.push(Point::new(x_hi - lay.w_tooth / 2.0, y + dir * lay.h_tooth));
        out.push(Point::new(x_hi - lay.w_tooth, y));
    }
}

/// Single-obstacle comb maze: a U-shaped enclosure around the start with
/// `k` interleaved fingers crossing the vertical start-target line, each
/// edged with sawteeth so that passing a finger costs boundary travel
/// `p / (k+1)` while the straight-line crossing count stays exactly `2k`.
///
/// With `d = None` the generator uses the minimum distance plus a small
/// margin. The target sits above the enclosure mouth.
pub fn gen_comb(k: usize, p: f64, d: Option<f64>) -> Result<Scene, SceneError> {
    let lay = CombLayout::new(k, p)?;
    let min_d = lay.y_top + lay.clear;
    let d = d.unwrap_or(min_d + 0.01 * p);
    if !(d.is_finite() && d >= min_d) {
        return Err(SceneError::InvalidParams(format!(
            "comb with k={k}, p={p} needs d >= {min_d} (got {d})"
        )));
    }
    let mut v: Vec<Point> = Vec::new();
    let out_x = lay.w_x + lay.wall;
    let floor_y = -lay.clear;
    // Outer shell: bottom, right side, right arm top.
    v.push(Point::new(-out_x, floor_y - lay.wall));
    v.push(Point::new(out_x, floor_y - lay.wall));
    v.push(Point::new(out_x, lay.y_top));
    v.push(Point::new(lay.w_x, lay.y_top));
    // Down the right inner wall, detouring around even fingers (attached
    // right, tip pointing left past the start-target line).
    let mut evens: Vec<usize> = (1..=lay.k).filter(|j| j % 2 == 0).collect();
    evens.reverse();
    for j in evens {
        let y_b = lay.finger_bottom(j);
        let y_t = y_b + lay.core;
        v.push(Point::new(lay.w_x, y_t));
        v.push(Point::new(-lay.x_m, y_t));
        sawtooth_left(&mut v, &lay, -lay.x_m, y_t, 1.0);
        v.push(Point::new(-lay.x_m - lay.b_saw, y_b));
        sawtooth_right(&mut v, &lay, -lay.x_m - lay.b_saw, y_b, -1.0);
        v.push(Point::new(lay.w_x, y_b));
    }
    // Floor, then up the left inner wall around odd fingers (attached left,
    // tip pointing right).
    v.push(Point::new(lay.w_x, floor_y));
    v.push(Point::new(-lay.w_x, floor_y));
    for j in (1..=lay.k).filter(|j| j % 2 == 1) {
        let y_b = lay.finger_bottom(j);
        let y_t = y_b + lay.core;
        v.push(Point::new(-lay.w_x, y_b));
        v.push(Point::new(lay.x_m, y_b));
        sawtooth_right(&mut v, &lay, lay.x_m, y_b, -1.0);
        v.push(Point::new(lay.x_m + lay.b_saw, y_t));
        sawtooth_left(&mut v, &lay, lay.x_m + lay.b_saw, y_t, 1.0);
        v.push(Point::new(-lay.w_x, y_t));
    }
    v.push(Point::new(-lay.w_x, lay.y_top));
    v.push(Point::new(-out_x, lay.y_top));
    let maze = Polygon::new(v)?;
    let mut name = format!("comb_k{k}_p{p}");
    name = name.replace('.', "p");
    Ok(Scene::new(
        name,
        Point::new(0.0, 0.0),
        Point::new(0.0, d),
        vec![maze],
    ))
}

/// Bracket-shaped single obstacle whose slowest group under split-at-hit
/// boundary following traverses the long finned arc twice.
///
/// Two horizontal arms joined by a left spine cross the vertical
/// start-target segment, giving four crossings. The lower arm's outer
/// portion carries a dense sawtooth band sized so the arc between its two
/// crossings is `fraction` of the total perimeter; the complementary routes
/// are short. A group that first rounds the finned arc, then picks the
/// spine direction at the upper arm, walks the finned arc again in reverse
/// before it can leave.
pub fn gen_doubleback(fraction: f64) -> Result<Scene, SceneError> {
    if !(0.2..=0.98).contains(&fraction) {
        return Err(SceneError::InvalidParams(format!(
            "doubleback fraction must lie in [0.2, 0.98] (got {fraction})"
        )));
    }
    // Bald skeleton (before fins), in scene units:
    //   lower arm A: y in [2.0, 2.6], x in [-4.0, 2.0], fin band x in [0.4, 1.9]
    //   upper arm B: y in [4.2, 4.8], x in [-4.0, 1.2]
    //   spine: x in [-4.0, -3.4] joining the arms
    // Bald perimeter 26.8; bald crossing-to-crossing arc around A's tip 4.6.
    let bald_total = 26.8;
    let bald_tip_arc = 4.6;
    let band = 1.5; // horizontal extent of each sawtooth band
    let extra = (fraction * bald_total - bald_tip_arc) / (1.0 - fraction);
    let amp = 1.0 + extra / (2.0 * band);
    let r = (amp * amp - 1.0).sqrt();
    let h_pref = 0.1;
    let teeth = ((band * r) / (2.0 * h_pref)).ceil().max(1.0) as usize;
    let w_tooth = band / teeth as f64;
    let h_tooth = r * w_tooth / 2.0;

    let mut v: Vec<Point> = Vec::new();
    // Lower arm bottom edge, finned toward the tip.
    v.push(Point::new(-4.0, 2.0));
    v.push(Point::new(0.4, 2.0));
    for i in 0..teeth {
        let x_lo = 0.4 + i as f64 * w_tooth;
        v.push(Point::new(x_lo + w_tooth / 2.0, 2.0 - h_tooth));
        v.push(Point::new(x_lo + w_tooth, 2.0));
    }
    v.push(Point::new(2.0, 2.0));
    v.push(Point::new(2.0, 2.6));
    v.push(Point::new(1.9, 2.6));
    for i in 0..teeth {
        let x_hi = 1.9 - i as f64 * w_tooth;
        v.push(Point::new(x_hi - w_tooth / 2.0, 2.6 + h_tooth));
        v.push(Point::new(x_hi - w_tooth, 2.6));
    }
    v.push(Point::new(-3.4, 2.6));
    v.push(Point::new(-3.4, 4.2));
    v.push(Point::new(1.2, 4.2));
    v.push(Point::new(1.2, 4.8));
    v.push(Point::new(-4.0, 4.8));
    let bracket = Polygon::new(v)?;
    let name = format!("doubleback_f{fraction}").replace('.', "p");
    Ok(Scene::new(
        name,
        Point::new(0.0, 0.0),
        Point::new(0.0, 10.0),
        vec![bracket],
    ))
}

const RANDOM_ATTEMPTS: u32 = 200;
const PLACEMENT_TRIES: u32 = 60;

/// Seeded random scene: `count` disjoint polygons inside `bbox`
/// (width, height), start and target at the midpoints of the left and
/// right box edges. Obstacles keep clear margins from the borders, the
/// endpoints, and each other; vertices stay off the start-target line; and
/// obstacles crossing that line twice must split their perimeter no worse
/// than about 27/73 between the two sides. The generator retries with
/// derived sub-streams until validation passes.
pub fn gen_random(
    seed: u64,
    count: usize,
    convex_only: bool,
    bbox: (f64, f64),
) -> Result<Scene, SceneError> {
    let (bw, bh) = bbox;
    if !(bw.is_finite() && bh.is_finite()) || bw <= 0.0 || bh <= 0.0 {
        return Err(SceneError::InvalidParams(format!(
            "random scene bbox must be positive (got {bw} x {bh})"
        )));
    }
    let scale = bw.min(bh);
    let start = Point::new(0.0, bh / 2.0);
    let target = Point::new(bw, bh / 2.0);
    let tol = Tolerances::for_diameter((bw * bw + bh * bh).sqrt());
    let name = format!(
        "random_s{seed}_c{count}{}",
        if convex_only { "_convex" } else { "" }
    );
    for attempt in 0..RANDOM_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        if let Some(polys) = try_place_all(&mut rng, count, convex_only, bw, bh, scale, start, target, &tol) {
            let mut scene = Scene::new(name.clone(), start, target, polys);
            scene.name = name.clone();
            if scene.validate().is_ok() {
                return Ok(scene);
            }
        }
    }
    Err(SceneError::GenerationExhausted(RANDOM_ATTEMPTS))
}

#[allow(clippy::too_many_arguments)]
fn try_place_all(
    rng: &mut ChaCha8Rng,
    count: usize,
    convex_only: bool,
    bw: f64,
    bh: f64,
    scale: f64,
    start: Point,
    target: Point,
    tol: &Tolerances,
) -> Option<Vec<Polygon>> {
    let inset = 0.05 * scale;
    let r_max = 0.11 * scale;
    let mut polys: Vec<Polygon> = Vec::with_capacity(count);
    for _ in 0..count {
        let mut placed = false;
        for _ in 0..PLACEMENT_TRIES {
            let cx = rng.gen_range(inset + r_max..=bw - inset - r_max);
            let cy = rng.gen_range(inset + r_max..=bh - inset - r_max);
            let radius = rng.gen_range(0.05 * scale..=r_max);
            let center = Point::new(cx, cy);
            let Some(poly) = sample_polygon(rng, center, radius, convex_only) else {
                continue;
            };
            if !candidate_ok(&poly, &polys, bw, bh, scale, start, target, tol) {
                continue;
            }
            polys.push(poly);
            placed = true;
            break;
        }
        if !placed {
            return None;
        }
    }
    Some(polys)
}

fn sample_polygon(
    rng: &mut ChaCha8Rng,
    center: Point,
    radius: f64,
    convex_only: bool,
) -> Option<Polygon> {
    use std::f64::consts::TAU;
    if convex_only {
        let n = rng.gen_range(5..=9);
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                let a = rng.gen_range(0.0..TAU);
                let r = radius * rng.gen_range(0.55..=1.0);
                center + Point::new(a.cos(), a.sin()) * r
            })
            .collect();
        let hull = convex_hull(&pts);
        if hull.len() < 3 {
            return None;
        }
        Polygon::new(hull).ok()
    } else {
        // Star-shaped around the center: jittered fan angles keep the loop
        // simple while radius jitter makes most samples non-convex.
        let n = rng.gen_range(6..=10);
        let verts: Vec<Point> = (0..n)
            .map(|i| {
                let a = TAU * i as f64 / n as f64 + rng.gen_range(-0.25..=0.25) * TAU / n as f64;
                let r = radius * rng.gen_range(0.45..=1.0);
                center + Point::new(a.cos(), a.sin()) * r
            })
            .collect();
        Polygon::new(verts).ok()
    }
}

#[allow(clippy::too_many_arguments)]
fn candidate_ok(
    poly: &Polygon,
    placed: &[Polygon],
    bw: f64,
    bh: f64,
    scale: f64,
    start: Point,
    target: Point,
    tol: &Tolerances,
) -> bool {
    let inset = 0.05 * scale;
    let line_margin = 1e-3 * scale;
    let clearance = 0.04 * scale;
    let separation = 0.02 * scale;
    for &v in poly.vertices() {
        if v.x < inset || v.x > bw - inset || v.y < inset || v.y > bh - inset {
            return false;
        }
        if (v.y - bh / 2.0).abs() < line_margin {
            return false;
        }
    }
    if poly.contains(start)
        || poly.contains(target)
        || poly.distance_to_boundary(start) < clearance
        || poly.distance_to_boundary(target) < clearance
    {
        return false;
    }
    for other in placed {
        if polygons_too_close(poly, other, separation) {
            return false;
        }
    }
    // Crossing structure on the start-target line: reject tangencies and
    // badly unbalanced two-crossing splits.
    let single = std::slice::from_ref(poly);
    match m_line_crossings(start, target, single, 0, tol) {
        Err(_) => false,
        Ok(xs) if xs.len() % 2 == 1 => false,
        Ok(xs) if xs.len() == 2 => {
            match perimeter_split_fractions(start, target, single, 0, tol) {
                Ok((l, r)) => l.min(r) >= 0.275,
                Err(_) => false,
            }
        }
        Ok(_) => true,
    }
}

fn polygons_too_close(a: &Polygon, b: &Polygon, separation: f64) -> bool {
    if a.contains(b.vertices()[0]) || b.contains(a.vertices()[0]) {
        return true;
    }
    for ea in 0..a.vertex_count() {
        let (a0, a1) = a.edge(ea);
        for eb in 0..b.vertex_count() {
            let (b0, b1) = b.edge(eb);
            if segment_distance(a0, a1, b0, b1) < separation {
                return true;
            }
        }
    }
    false
}

fn segment_distance(a0: Point, a1: Point, b0: Point, b1: Point) -> f64 {
    // Proper crossing means zero distance; otherwise the minimum is attained
    // endpoint-to-segment.
    let d1 = a1 - a0;
    let d2 = b1 - b0;
    let denom = d1.cross(d2);
    if denom != 0.0 {
        let r = b0 - a0;
        let t = r.cross(d2) / denom;
        let u = r.cross(d1) / denom;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
            return 0.0;
        }
    }
    point_segment_distance(a0, b0, b1)
        .min(point_segment_distance(a1, b0, b1))
        .min(point_segment_distance(b0, a0, a1))
        .min(point_segment_distance(b1, a0, a1))
}

fn point_segment_distance(p: Point, s0: Point, s1: Point) -> f64 {
    let d = s1 - s0;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return p.dist(s0);
    }
    let t = ((p - s0).dot(d) / len_sq).clamp(0.0, 1.0);
    p.dist(s0 + d * t)
}
