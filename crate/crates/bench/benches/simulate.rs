// Copyright 2026 The qcontract Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qcontract::algorithms::{hadamard_test_pipeline, qft_circuit};
use qcontract::decompose::decompose_controlled;
use qcontract::simulator::{apply_gate, sample_counts};
use qcontract::{ContractCircuit, GateSpec, OperatorExpr, StateVector};
use qcontract_bench::{checked_circuit, layered_circuit};

fn gate_kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_gate");
    for n in [8usize, 12, 16] {
        let s = StateVector::zero(n);
        let h = GateSpec::h();
        let cx = GateSpec::cx();
        group.bench_with_input(BenchmarkId::new("h", n), &n, |b, &n| {
            b.iter(|| apply_gate(black_box(&s), &h, &[n / 2]).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cx", n), &n, |b, &n| {
            b.iter(|| apply_gate(black_box(&s), &cx, &[0, n - 1]).unwrap())
        });
    }
    group.finish();
}

fn circuits(c: &mut Criterion) {
    let mut group = c.benchmark_group("circuit");
    for n in [6usize, 10] {
        let plain = layered_circuit(n, 4).unwrap();
        let checked = checked_circuit(n, 4).unwrap();
        group.bench_with_input(BenchmarkId::new("layered", n), &plain, |b, circ| {
            b.iter(|| circ.run().unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("layered_checked", n),
            &checked,
            |b, circ| b.iter(|| circ.run().unwrap()),
        );
    }
    for n in [4usize, 8] {
        let qft = qft_circuit(n).unwrap();
        group.bench_with_input(BenchmarkId::new("qft_checked", n), &qft, |b, circ| {
            b.iter(|| circ.run().unwrap())
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let probs = vec![1.0 / 16.0; 16];
    c.bench_function("sample_counts_100k", |b| {
        b.iter(|| sample_counts(black_box(&probs), 100_000, 1).unwrap())
    });
    let t = GateSpec::t();
    let mut prep = ContractCircuit::named("prep", 1).unwrap();
    prep.append_gate(GateSpec::h(), &[0]).unwrap();
    let pipeline = hadamard_test_pipeline(&t, &OperatorExpr::Gate(t.clone()), &prep).unwrap();
    c.bench_function("hadamard_pipeline_100k", |b| {
        b.iter(|| pipeline.run(100_000, 1).unwrap())
    });
}

fn decomposition(c: &mut Criterion) {
    let u = GateSpec::rx(0.3).unitary().clone();
    c.bench_function("decompose_controlled", |b| {
        b.iter(|| decompose_controlled(black_box(&u)).unwrap())
    });
}

criterion_group!(benches, gate_kernel, circuits, sampling, decomposition);
criterion_main!(benches);
