use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rdhei_bench::{hiding_key, image_key, lena, square, SIDES};
use rdhei_core::bits::first_msb_map;
use rdhei_core::codec::{compress, decompress};
use rdhei_core::payload::max_message_len;
use rdhei_core::rotation::{rotate_all, Direction, RotationSchedule};
use rdhei_core::*;

fn location_maps(c: &mut Criterion) {
    let mut group = c.benchmark_group("select_optimal");
    for side in SIDES {
        let img = square(side);
        group.throughput(Throughput::Elements(img.len() as u64));
        for method in [Method::Emr, Method::Lmr] {
            group.bench_with_input(BenchmarkId::new(method.name(), side), &img, |b, img| {
                b.iter(|| select_optimal(black_box(img), method))
            });
        }
    }
    group.finish();
}

fn rotation(c: &mut Criterion) {
    let mut group = c.benchmark_group("rotation");
    for side in SIDES {
        let img = square(side);
        let stream = keystream(&image_key(), side, side);
        group.throughput(Throughput::Elements(img.len() as u64));
        for (name, schedule) in [
            ("emr", RotationSchedule::emr(side, side)),
            ("lmr", RotationSchedule::lmr(side, side)),
        ] {
            group.bench_with_input(BenchmarkId::new(name, side), &img, |b, img| {
                b.iter_batched_ref(
                    || img.clone(),
                    |g| rotate_all(g, &stream, &schedule, Direction::Forward),
                    criterion::BatchSize::LargeInput,
                )
            });
        }
    }
    group.finish();
}

fn codec(c: &mut Criterion) {
    let mut group = c.benchmark_group("codec");
    let img = lena();
    let eta = first_msb_map(&img);
    let map = select_optimal(&img, Method::Lmr).remove(0).map;
    for (name, plane) in [("first_msb_map", eta), ("location_map", map)] {
        let packed = compress(&plane);
        group.throughput(Throughput::Elements(plane.bits().len() as u64));
        group.bench_function(BenchmarkId::new("compress", name), |b| {
            b.iter(|| compress(black_box(&plane)))
        });
        group.bench_function(BenchmarkId::new("decompress", name), |b| {
            b.iter(|| decompress(black_box(&packed)).unwrap())
        });
    }
    group.finish();
}

fn pipelines(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline_512");
    group.sample_size(20);
    let img = lena();
    let (k1, k2) = (image_key(), hiding_key());

    let emr = emr_encode(&img, &k1).unwrap();
    let emr_message = vec![0x42; max_message_len(emr.capacity_bits)];
    let emr_marked = emr_hide(&emr.image, &k2, &emr_message).unwrap();
    group.bench_function("emr_encode", |b| {
        b.iter(|| emr_encode(black_box(&img), &k1).unwrap())
    });
    group.bench_function("emr_hide", |b| {
        b.iter(|| emr_hide(&emr.image, &k2, &emr_message).unwrap())
    });
    group.bench_function("emr_extract", |b| {
        b.iter(|| emr_extract(&emr_marked, &k2).unwrap())
    });
    group.bench_function("emr_recover", |b| {
        b.iter(|| emr_recover(&emr_marked, &k1).unwrap())
    });

    let lmr = lmr_encode(&img, &k1).unwrap().good().expect("good case");
    let lmr_message = vec![0x42; max_message_len(lmr.capacity_bits)];
    let lmr_marked = lmr_hide(&lmr.image, &k2, &lmr_message).unwrap();
    group.bench_function("lmr_encode", |b| {
        b.iter(|| lmr_encode(black_box(&img), &k1).unwrap())
    });
    group.bench_function("lmr_hide", |b| {
        b.iter(|| lmr_hide(&lmr.image, &k2, &lmr_message).unwrap())
    });
    group.bench_function("lmr_extract", |b| {
        b.iter(|| lmr_extract(&lmr_marked, &k2).unwrap())
    });
    group.bench_function("lmr_recover", |b| {
        b.iter(|| lmr_recover(&lmr_marked, &k1).unwrap())
    });
    group.finish();
}

fn metrics_suite(c: &mut Criterion) {
    let img = lena();
    let other = emr_recover(&emr_encode(&img, &image_key()).unwrap().image, &image_key()).unwrap();
    c.bench_function("metrics/ssim_512", |b| {
        b.iter(|| metrics::ssim(black_box(&img), &other))
    });
    c.bench_function("metrics/entropy_512", |b| {
        b.iter(|| metrics::entropy(black_box(&img)))
    });
}

criterion_group!(
    benches,
    location_maps,
    rotation,
    codec,
    pipelines,
    metrics_suite
);
criterion_main!(benches);
