#include "mivt/model.hpp"

#include <stdexcept>

#include "mivt/errors.hpp"

namespace mivt {

MivtModel::MivtModel(std::vector<TrawlSpec> trawls_, SeedSpec seed_)
    : trawls(std::move(trawls_)), seed(std::move(seed_)) {
    if (trawls.empty()) throw std::invalid_argument("MivtModel: needs at least one component");
    if (trawls.size() != dimension(seed))
        throw std::invalid_argument("MivtModel: trawl count must match seed dimension");
    for (const TrawlSpec& t : trawls) lebesgue(t);  // throws if infinite
}

void CountSeries::validate() const {
    if (counts.empty() || counts.front().empty())
        throw std::invalid_argument("CountSeries: must hold at least one component and one bin");
    if (labels.size() != counts.size())
        throw std::invalid_argument("CountSeries: one label per component required");
    const std::size_t k = counts.front().size();
    for (const auto& row : counts) {
        if (row.size() != k) throw std::invalid_argument("CountSeries: ragged component rows");
        for (std::int64_t c : row)
            if (c < 0) throw std::invalid_argument("CountSeries: negative count");
    }
    if (!(delta > 0.0)) throw std::invalid_argument("CountSeries: delta must be positive");
}

}  // namespace mivt
