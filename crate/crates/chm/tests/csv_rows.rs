use chm::table::{read_rows, write_cloud, Row, RowWriter};
use chm_core::{gallery, run_schedule, Code, CodedPoint, DensityRecord, PointCloud, ScheduleOptions};
use proptest::prelude::*;

#[test]
fn schedule_rows_round_trip() {
    let sys = gallery::get("sierpinski(0.2)").unwrap().system;
    let schedule = run_schedule(&sys, 3, &ScheduleOptions::default()).unwrap();
    let mut w = RowWriter::new(Vec::new()).unwrap();
    for r in &schedule.records {
        w.write(r).unwrap();
    }
    let bytes = w.into_inner();
    let text = String::from_utf8(bytes.clone()).unwrap();
    assert!(
        text.starts_with("generation,m_tilde,d_tilde,center_code,witness_code,ball_measure,certified,upper_bound\n")
    );
    let rows = read_rows(&bytes[..]).unwrap();
    let expected: Vec<Row> = schedule.records.iter().map(Row::from).collect();
    assert_eq!(rows, expected);
    for (row, rec) in rows.iter().zip(&schedule.records) {
        assert_eq!(row.center_code.parse::<Code>().unwrap(), rec.center.code);
    }
}

#[test]
fn cloud_export_has_one_line_per_point() {
    let sys = gallery::get("quarter-cantor").unwrap().system;
    let cloud = PointCloud::generation_of(&sys, 1, 1 << 10).unwrap();
    let mut out = Vec::new();
    write_cloud(&cloud, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "code,x1,x2,weight");
    assert_eq!(lines.len(), 17);
    assert!(lines[1].starts_with("00,"));
}

fn record(m: f64, d: f64, mu: f64, bound: Option<f64>) -> DensityRecord {
    let point = |code: &[u16]| CodedPoint { coords: vec![0.0], code: Code::from(code), weight: 0.5 };
    DensityRecord {
        generation: 0,
        m_tilde: m,
        center: point(&[0, 11, 2]),
        witness: point(&[1]),
        d_tilde: d,
        ball_discrete_measure: mu,
        certified: bound.is_some(),
        certified_upper_bound: bound,
        all_minimizers: Vec::new(),
    }
}

proptest! {
    #[test]
    fn reals_survive_printing(m in 1e-3f64..1e3, d in 1e-300f64..1e300, mu in 0.0f64..1.0, b in prop::option::of(0.1f64..10.0)) {
        let rec = record(m, d, mu, b);
        let mut w = RowWriter::new(Vec::new()).unwrap();
        w.write(&rec).unwrap();
        let rows = read_rows(&w.into_inner()[..]).unwrap();
        prop_assert_eq!(&rows[0], &Row::from(&rec));
        prop_assert_eq!(rows[0].center_code.as_str(), "0.11.2");
    }
}
