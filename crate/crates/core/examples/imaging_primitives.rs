//! Equalize, threshold, clean and label a small synthetic raster.

use irgaze::imaging::*;

fn main() {
    // two bright blobs and a speck on a dim gradient
    let img = GrayImage::from_fn(40, 24, |c, r| {
        let blob = |cx: f64, cy: f64, rad: f64| {
            ((c as f64 - cx).powi(2) + (r as f64 - cy).powi(2)).sqrt() <= rad
        };
        if blob(10.0, 12.0, 5.0) || blob(28.0, 8.0, 3.5) || (c == 35 && r == 20) {
            200
        } else {
            (20 + c) as u8
        }
    });
    let eq = histogram_equalize(&img);
    println!(
        "equalized range {}..={}",
        eq.data().iter().min().unwrap(),
        eq.max_value()
    );

    let mask = binarize(&img, 128.0);
    let opened = morphology(&mask, MorphOp::Open, 1);
    println!(
        "foreground {} px, {} after opening",
        mask.count_ones(),
        opened.count_ones()
    );

    for r in connected_components(&opened) {
        println!(
            "region area {:3} centroid ({:5.2}, {:5.2}) eccentricity {:.3} border {}",
            r.area, r.centroid.x, r.centroid.y, r.eccentricity, r.touches_border
        );
    }

    let bytes = encode_pgm(&img);
    assert_eq!(decode_pgm(&bytes).unwrap(), img);
    println!("pgm: {} bytes", bytes.len());
}
