use super::GrayImage;

pub fn histogram(img: &GrayImage) -> [usize; 256] {
    let mut hist = [0usize; 256];
    for &v in img.data() {
        hist[v as usize] += 1;
    }
    hist
}

/// Classic CDF remapping,
/// `out(v) = round((cdf(v) - cdf_min) / (W*H - cdf_min) * 255)`.
///
/// `cdf_min` is the smallest nonzero cumulative count. A constant image has
/// `cdf_min == W*H` and maps every pixel to 0.
pub fn histogram_equalize(img: &GrayImage) -> GrayImage {
    let hist = histogram(img);
    let total = img.data().len();
    let mut lut = [0u8; 256];
    let mut cdf = 0usize;
    let mut cdf_min = None;
    for (v, &count) in hist.iter().enumerate() {
        cdf += count;
        if cdf == 0 {
            continue;
        }
        let min = *cdf_min.get_or_insert(cdf);
        lut[v] = if total == min {
            0
        } else {
            ((cdf - min) as f64 / (total - min) as f64 * 255.0).round() as u8
        };
    }
    let data = img.data().iter().map(|&v| lut[v as usize]).collect();
    GrayImage::new(img.width(), img.height(), data).expect("same dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_maps_to_zero() {
        let out = histogram_equalize(&GrayImage::filled(5, 3, 77));
        assert!(out.data().iter().all(|&v| v == 0));
    }

    #[test]
    fn two_level_images() {
        let img = GrayImage::new(4, 1, vec![10, 20, 10, 20]).unwrap();
        assert_eq!(histogram_equalize(&img).data(), &[0, 255, 0, 255]);
        let img = GrayImage::new(2, 2, vec![0, 255, 255, 0]).unwrap();
        assert_eq!(histogram_equalize(&img).data(), &[0, 255, 255, 0]);
    }

    #[test]
    fn three_levels_hand_checked() {
        // cdf = 1, 3, 4; cdf_min = 1 -> (0, 2/3, 1) * 255
        let img = GrayImage::new(4, 1, vec![5, 9, 9, 200]).unwrap();
        assert_eq!(histogram_equalize(&img).data(), &[0, 170, 170, 255]);
    }
}
