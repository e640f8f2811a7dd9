use rigiditylab_core::coord::Coord;
use rigiditylab_core::linking::*;
use rigiditylab_core::models;
use rigiditylab_core::rat;

fn main() {
    let rep = models::geodesic_genus2(models::Backend::Moebius);
    let eps = rat::rat(1, 1000);
    let x = 0.749725341796875f64;
    let y = 0.914532470703125f64;
    let budget = SearchBudget::default();
    let half = &eps / rat::rat_int(2);
    let a = find_element_near(&rep, &Coord::Real(x), &half, &budget);
    match &a {
        Ok(w) => {
            println!("a ok, word len {}", w.word.symbol_len());
            for p in &w.fixed_points.points {
                println!("  a fp {:?} {} r={:e}", p.kind, p.location.to_f64(), p.radius);
            }
        }
        Err(e) => println!("a err: {e}"),
    }
    let b = find_element_near(&rep, &Coord::Real(y), &half, &budget);
    match &b {
        Ok(w) => {
            println!("b ok, word len {}", w.word.symbol_len());
            for p in &w.fixed_points.points {
                println!("  b fp {:?} {} r={:e}", p.kind, p.location.to_f64(), p.radius);
            }
        }
        Err(e) => println!("b err: {e}"),
    }
    let r = find_element_with_pair(&rep, &Coord::Real(x), &Coord::Real(y), &eps, &budget);
    match r {
        Ok(w) => println!("pair ok len {}", w.word.symbol_len()),
        Err(e) => println!("pair err: {e}"),
    }
}
