use crbem::assembly::{panel_integral, QuadSettings};
use crbem::mesh::Point2;

fn main() -> crbem::Result<()> {
    let t = [
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(0.0, 1.0),
    ];
    let pairs = [
        ("identical", t),
        (
            "shared edge",
            [
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 1.0),
            ],
        ),
        (
            "shared vertex",
            [
                Point2::new(1.0, 0.0),
                Point2::new(2.0, 0.2),
                Point2::new(1.5, 1.0),
            ],
        ),
        (
            "disjoint",
            [
                Point2::new(4.0, 0.0),
                Point2::new(5.0, 0.0),
                Point2::new(4.0, 1.0),
            ],
        ),
    ];
    for (name, other) in pairs {
        print!("{name:>14}:");
        for p in [3, 5, 7, 9] {
            print!(
                " {:.12e}",
                panel_integral(t, other, QuadSettings::with_order(p))?
            );
        }
        println!();
    }
    Ok(())
}
