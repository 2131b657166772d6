use proptest::prelude::*;

use tensekit::classify::{classify_pair, PairPolicy};
use tensekit::ingest::{FormantTrack, Frame};
use tensekit::report::{parse_records_csv, write_records_csv, RecordRow, RowStatus};
use tensekit::scales::{bark_to_hz, hz_to_bark};
use tensekit::tenseness::{landmarks, theta_n};

fn opt() -> impl Strategy<Value = Option<f64>> {
    prop_oneof![Just(None), any::<f64>().prop_filter("finite", |v| v.is_finite()).prop_map(Some)]
}

prop_compose! {
    fn record_row()(
        nums in proptest::collection::vec(opt(), 9),
        class in "[a-z]{1,6}",
        error in "[ -~]{0,12}",
        ok in any::<bool>(),
    ) -> RecordRow {
        RecordRow {
            path: "tracks/a,b.csv".into(),
            vowel_label: "ɪ".into(),
            class_label: class,
            language: "en".into(),
            source: "s\"q".into(),
            d_ds: nums[0],
            theta1_rad: if ok { nums[1].or(Some(0.25)) } else { nums[1] },
            theta_f1_rad: nums[2],
            f1_33_hz: nums[3],
            z1_33_bark: nums[4],
            f0_33_hz: nums[5],
            f0_66_hz: nums[6],
            delta_f0_hz: nums[7],
            deviation_hz: None,
            status: if ok { RowStatus::Ok } else { RowStatus::Error },
            error: if ok { String::new() } else { error },
            config_hash: "0123456789abcdef".into(),
        }
    }
}

proptest! {
    #[test]
    fn records_csv_round_trips_bit_exactly(rows in proptest::collection::vec(record_row(), 1..8)) {
        let csv = write_records_csv(&rows);
        let back = parse_records_csv(&csv).unwrap();
        prop_assert_eq!(back, rows);
    }

    #[test]
    fn theta_sign_follows_f1_direction(
        onset in 0.0..500.0f64,
        dur in 30.0..400.0f64,
        f33 in 150.0..1200.0f64,
        ratio in 0.5..2.0f64,
    ) {
        let seg = landmarks(onset, onset + dur).unwrap();
        let f66 = f33 * ratio;
        let frames = vec![
            Frame { f1_hz: Some(f33), ..Frame::new(onset) },
            Frame { f1_hz: Some(f33), ..Frame::new(seg.t33_ms) },
            Frame { f1_hz: Some(f66), ..Frame::new(seg.t66_ms) },
            Frame { f1_hz: Some(f66), ..Frame::new(onset + dur) },
        ];
        let track = FormantTrack::new(frames, "p").unwrap();
        let theta = theta_n(&track, &seg, 1).unwrap();
        let dz = hz_to_bark(f66).unwrap() - hz_to_bark(f33).unwrap();
        prop_assert!((theta - (dz / seg.d_ds).atan()).abs() < 1e-12);
        prop_assert_eq!(theta < 0.0, f66 < f33);
        prop_assert!(theta.abs() < std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn bark_is_monotone_and_invertible(a in 20.0..20_000.0f64, b in 20.0..20_000.0f64) {
        let (za, zb) = (hz_to_bark(a).unwrap(), hz_to_bark(b).unwrap());
        prop_assert_eq!(a < b, za < zb);
        prop_assert!((bark_to_hz(za).unwrap() - a).abs() <= 1e-9 * a);
    }

    #[test]
    fn pair_verdict_is_symmetric(
        a in proptest::collection::vec(-1.0..1.0f64, 3..20),
        b in proptest::collection::vec(-1.0..1.0f64, 3..20),
    ) {
        let p = PairPolicy::default();
        let (ab, ba) = (classify_pair(&a, &b, &p), classify_pair(&b, &a, &p));
        match (ab, ba) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(x.label_a, y.label_b);
                prop_assert_eq!(x.label_b, y.label_a);
                prop_assert_eq!(x.bifurcated, y.bifurcated);
            }
            (x, y) => prop_assert_eq!(x.is_err(), y.is_err()),
        }
    }
}
