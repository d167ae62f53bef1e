use criterion::{black_box, criterion_group, criterion_main, Criterion};
use graphgames_core::rewards::wagner_conjecture_2_1;
use graphgames_core::search::{ce_train, rollout, CeConfig, Policy, Sample};
use graphgames_core::{EnvConfig, Game};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn linear_env(n: usize) -> EnvConfig {
    EnvConfig::new(n, Game::Linear, wagner_conjecture_2_1(n).unwrap())
}

fn rollouts(c: &mut Criterion) {
    let env = linear_env(18);
    let policy = Policy::new(env.observation_len(), &[128, 64], env.action_space_size(), &mut ChaCha8Rng::seed_from_u64(0));
    let mut seed = 0;
    c.bench_function("rollout_linear_18_mlp", |b| {
        b.iter(|| {
            seed += 1;
            rollout(&policy, black_box(&env), seed).unwrap().total_reward
        })
    });
}

fn training(c: &mut Criterion) {
    let env = linear_env(18);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let policy = Policy::new(env.observation_len(), &[128, 64], 2, &mut rng);
    let inputs: Vec<Vec<f64>> = (0..32)
        .map(|i| (0..env.observation_len()).map(|k| f64::from(u8::from((i * 7 + k) % 3 == 0))).collect())
        .collect();
    let batch: Vec<Sample<'_>> = inputs.iter().enumerate().map(|(i, x)| Sample { input: x, action: i % 2, mask: None }).collect();
    c.bench_function("gradient_batch_32", |b| b.iter(|| policy.loss_and_gradients(black_box(&batch)).0));

    let small = linear_env(8);
    let cfg = CeConfig { iterations: 3, episodes_per_iteration: 100, hidden: vec![64, 32], ..CeConfig::default() };
    let mut group = c.benchmark_group("ce");
    group.sample_size(10);
    group.bench_function("three_iterations_linear_8", |b| b.iter(|| ce_train(&cfg, &small, None, |_| {}).unwrap().history.len()));
    group.finish();
}

criterion_group!(benches, rollouts, training);
criterion_main!(benches);
