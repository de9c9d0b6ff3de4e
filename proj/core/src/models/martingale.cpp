#include "fcast/models/martingale.hpp"
#include "fcast/core/errors.hpp"

namespace fcast::models {

double martingale_predict(const ValueSeries& history) {
    if (history.empty()) {
        throw EmptyDataError("martingale: cannot predict from an empty history");
    }
    return history.back();
}

} // namespace fcast::models
