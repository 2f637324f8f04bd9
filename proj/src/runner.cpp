#include "bellsim/runner.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace bellsim {

namespace {

struct ChunkBlock {
    std::vector<RunningTally> cells;
    std::uint64_t ledger_clean = 0;
    std::uint8_t a_reads = 0;
    std::uint8_t b_reads = 0;
};

ChunkBlock run_chunk(const TrialRunRequest& req, std::uint64_t chunk, std::uint64_t count) {
    const std::size_t ka = req.settings_a.size();
    const std::size_t kb = req.settings_b.size();

    RngStream base = RngStream(req.seed, req.stream_root).substream(chunk);
    RngStream source = base.substream(kRoleSource);
    RngStream chooser_a = base.substream(kRoleChooserA);
    RngStream chooser_b = base.substream(kRoleChooserB);
    RngStream station_a = base.substream(kRoleStationA);
    RngStream station_b = base.substream(kRoleStationB);

    ChunkBlock block;
    block.cells.resize(ka * kb);

    for (std::uint64_t t = 0; t < count; ++t) {
        const SharedPayload payload{sample_uniform_sphere(source)};
        const std::size_t ia = pick_candidate(chooser_a, ka);
        const std::size_t ib = pick_candidate(chooser_b, kb);
        const UnitVector3& sa = req.settings_a[ia];
        const UnitVector3& sb = req.settings_b[ib];

        StationContext ctx_a(sa, payload, station_a, &sb);
        StationContext ctx_b(sb, payload, station_b, &sa);
        const StationRecord rec_a = req.model->measure_a(ctx_a);
        const StationRecord rec_b = req.model->measure_b(ctx_b);
        const TrialValue value = req.model->combine(rec_a, rec_b, sa, sb, payload);

        block.cells[ia * kb + ib].accumulate(value);
        const std::uint8_t ra = ctx_a.reads();
        const std::uint8_t rb = ctx_b.reads();
        block.a_reads |= ra;
        block.b_reads |= rb;
        if (((ra | rb) & kReadRemoteSetting) == 0) {
            ++block.ledger_clean;
        }
    }
    return block;
}

}  // namespace

std::size_t pick_candidate(RngStream& chooser, std::size_t k) {
    if (k == 1) {
        return 0;  // fixed setting: no draw, so single-setting runs are chooser-free
    }
    const double u = chooser.uniform01();
    auto idx = static_cast<std::size_t>(u * static_cast<double>(k));
    return idx < k ? idx : k - 1;
}

TrialRunResult run_trials(const TrialRunRequest& request) {
    if (request.model == nullptr) {
        throw std::invalid_argument("run_trials: model is required");
    }
    if (request.n == 0) {
        throw std::invalid_argument("run_trials: trial count must be positive");
    }
    if (request.settings_a.empty() || request.settings_b.empty()) {
        throw std::invalid_argument("run_trials: each station needs at least one candidate setting");
    }
    if (request.threads < 1) {
        throw std::invalid_argument("run_trials: thread count must be positive");
    }

    const std::uint64_t n_chunks = (request.n + kChunkTrials - 1) / kChunkTrials;
    const auto chunk_len = [&](std::uint64_t c) {
        return c + 1 == n_chunks ? request.n - c * kChunkTrials : kChunkTrials;
    };

    std::vector<ChunkBlock> blocks(n_chunks);
    const unsigned workers =
        std::min<std::uint64_t>(static_cast<std::uint64_t>(request.threads), n_chunks);
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) {
            blocks[c] = run_chunk(request, c, chunk_len(c));
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
                    blocks[c] = run_chunk(request, c, chunk_len(c));
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    TrialRunResult result;
    result.cells.resize(request.settings_a.size() * request.settings_b.size());
    result.trials = request.n;
    for (std::uint64_t c = 0; c < n_chunks; ++c) {  // fixed merge order keeps results thread-count independent
        const ChunkBlock& block = blocks[c];
        for (std::size_t i = 0; i < result.cells.size(); ++i) {
            result.cells[i].merge(block.cells[i]);
        }
        result.ledger_clean_trials += block.ledger_clean;
        result.a_reads_union |= block.a_reads;
        result.b_reads_union |= block.b_reads;
    }
    return result;
}

}  // namespace bellsim
