use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use multisim_bench::two_region_image;
use multisim_core::segmentation::default_threshold;
use multisim_core::{build_segmenter, segment, Method, SimilarityParams};

fn segment_image(c: &mut Criterion) {
    let mut group = c.benchmark_group("segment");
    group.sample_size(20);
    for size in [64usize, 256] {
        let (img, seeds) = two_region_image(size);
        for m in [Method::RealJaccard, Method::Coincidence] {
            let seg = build_segmenter(&img, &seeds, SimilarityParams::new(m), default_threshold(m))
                .expect("valid seeds");
            group.bench_function(format!("{}_{size}", m.label()), |b| {
                b.iter(|| segment(black_box(&img), &seg))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, segment_image);
criterion_main!(benches);
