//! Hartigan's dip statistic.
//!
//! Exact computation on sorted data by alternating greatest-convex-minorant
//! and least-concave-majorant fits over a shrinking modal interval. Runs in
//! linear time after sorting. The result lies in `[1/(2n), 1/4]`.

use crate::error::{Error, Result};
use crate::stats::sorted;

/// Dip of unsorted data.
pub fn dip_statistic(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: values.len() });
    }
    Ok(dip_of_sorted(&sorted(values)))
}

/// Dip of ascending data with at least one element.
///
/// Works with `2n * dip` throughout and divides once at the end.
pub fn dip_of_sorted(xs: &[f64]) -> f64 {
    let n = xs.len();
    debug_assert!(n >= 1);
    if n < 2 || xs[0] == xs[n - 1] {
        return 1.0 / (2 * n) as f64;
    }
    // 1-based copies keep the index arithmetic readable
    let mut x = Vec::with_capacity(n + 1);
    x.push(0.0);
    x.extend_from_slice(xs);

    // mn[j]: predecessor of j on the convex minorant of points 1..j
    let mut mn = vec![0usize; n + 1];
    mn[1] = 1;
    for j in 2..=n {
        mn[j] = j - 1;
        loop {
            let mnj = mn[j];
            let mnmnj = mn[mnj];
            if mnj == 1
                || (x[j] - x[mnj]) * ((mnj - mnmnj) as f64) < (x[mnj] - x[mnmnj]) * ((j - mnj) as f64)
            {
                break;
            }
            mn[j] = mnmnj;
        }
    }

    // mj[k]: successor of k on the concave majorant of points k..n
    let mut mj = vec![0usize; n + 1];
    mj[n] = n;
    for k in (1..n).rev() {
        mj[k] = k + 1;
        loop {
            let mjk = mj[k];
            let mjmjk = mj[mjk];
            if mjk == n
                || (x[k] - x[mjk]) * (mjk as f64 - mjmjk as f64)
                    < (x[mjk] - x[mjmjk]) * (k as f64 - mjk as f64)
            {
                break;
            }
            mj[k] = mjmjk;
        }
    }

    let mut gcm = vec![0usize; n + 2];
    let mut lcm = vec![0usize; n + 2];
    let mut low = 1usize;
    let mut high = n;
    let mut dip = 1.0f64;

    loop {
        // change points of the GCM from high down to low
        let mut ig = 1;
        gcm[1] = high;
        while gcm[ig] > low {
            gcm[ig + 1] = mn[gcm[ig]];
            ig += 1;
        }
        let l_gcm = ig;
        let mut ix = ig - 1;

        // change points of the LCM from low up to high
        let mut ih = 1;
        lcm[1] = low;
        while lcm[ih] < high {
            lcm[ih + 1] = mj[lcm[ih]];
            ih += 1;
        }
        let l_lcm = ih;
        let mut iv = 2;

        // largest distance between GCM and LCM on [low, high]
        let mut d = 0.0f64;
        if l_gcm != 2 || l_lcm != 2 {
            loop {
                let gcmix = gcm[ix];
                let lcmiv = lcm[iv];
                if gcmix > lcmiv {
                    let gcmi1 = gcm[ix + 1];
                    let dx = (lcmiv as f64 - gcmi1 as f64 + 1.0)
                        - (x[lcmiv] - x[gcmi1]) * (gcmix - gcmi1) as f64 / (x[gcmix] - x[gcmi1]);
                    iv += 1;
                    if dx >= d {
                        d = dx;
                        ig = ix + 1;
                        ih = iv - 1;
                    }
                } else {
                    let lcmiv1 = lcm[iv - 1];
                    let dx = (x[gcmix] - x[lcmiv1]) * (lcmiv - lcmiv1) as f64 / (x[lcmiv] - x[lcmiv1])
                        - (gcmix as f64 - lcmiv1 as f64 - 1.0);
                    ix = ix.saturating_sub(1);
                    if dx >= d {
                        d = dx;
                        ig = ix + 1;
                        ih = iv;
                    }
                }
                if ix < 1 {
                    ix = 1;
                }
                if iv > l_lcm {
                    iv = l_lcm;
                }
                if gcm[ix] == lcm[iv] {
                    break;
                }
            }
        } else {
            d = 1.0;
        }

        if d < dip {
            break;
        }

        // dip of the convex minorant on [gcm[l_gcm], gcm[ig]]
        let mut dip_l = 0.0f64;
        for j in ig..l_gcm {
            let (jb, je) = (gcm[j + 1], gcm[j]);
            let mut max_t = 1.0f64;
            if je - jb > 1 && x[je] != x[jb] {
                let c = (je - jb) as f64 / (x[je] - x[jb]);
                for jj in jb..=je {
                    let t = (jj - jb + 1) as f64 - (x[jj] - x[jb]) * c;
                    max_t = max_t.max(t);
                }
            }
            dip_l = dip_l.max(max_t);
        }

        // dip of the concave majorant on [lcm[ih], lcm[l_lcm]]
        let mut dip_u = 0.0f64;
        for j in ih..l_lcm {
            let (jb, je) = (lcm[j], lcm[j + 1]);
            let mut max_t = 1.0f64;
            if je - jb > 1 && x[je] != x[jb] {
                let c = (je - jb) as f64 / (x[je] - x[jb]);
                for jj in jb..=je {
                    let t = (x[jj] - x[jb]) * c - (jj as f64 - jb as f64 - 1.0);
                    max_t = max_t.max(t);
                }
            }
            dip_u = dip_u.max(max_t);
        }

        dip = dip.max(dip_l.max(dip_u));

        // without this check the iteration can cycle forever
        if low == gcm[ig] && high == lcm[ih] {
            break;
        }
        low = gcm[ig];
        high = lcm[ih];
    }

    dip / (2 * n) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points() {
        assert_eq!(dip_statistic(&[0.0, 1.0]).unwrap(), 0.25);
        assert_eq!(dip_statistic(&[1.0, 0.0]).unwrap(), 0.25);
    }

    #[test]
    fn five_point_grid() {
        assert!((dip_statistic(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn too_few_points() {
        assert_eq!(dip_statistic(&[1.0]), Err(Error::TooFewPoints { needed: 2, got: 1 }));
    }

    #[test]
    fn constant_data_hits_lower_bound() {
        assert_eq!(dip_statistic(&[2.0; 8]).unwrap(), 1.0 / 16.0);
    }

    #[test]
    fn two_clusters_have_large_dip() {
        let mut v: Vec<f64> = (0..50).map(|i| i as f64 * 0.01).collect();
        v.extend((0..50).map(|i| 10.0 + i as f64 * 0.01));
        let d = dip_statistic(&v).unwrap();
        assert!(d > 0.2, "{d}");
        assert!(d <= 0.25);
    }
}
