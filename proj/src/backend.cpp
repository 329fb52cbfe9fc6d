#include "narrclass/backend.hpp"

#include <omp.h>

namespace narrclass {

void CompletionRequest::validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw std::invalid_argument("temperature must be within [0, 2]");
  }
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
}

const char* to_string(BackendErrorKind kind) {
  switch (kind) {
    case BackendErrorKind::Network: return "network";
    case BackendErrorKind::Auth: return "auth";
    case BackendErrorKind::Client: return "client";
    case BackendErrorKind::Malformed: return "malformed";
    case BackendErrorKind::Invalid: return "invalid";
  }
  return "unknown";
}

std::vector<BatchItem> complete_batch(CompletionBackend& backend,
                                      std::span<const CompletionRequest> requests, int parallelism) {
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
  std::vector<BatchItem> out(requests.size());
  const auto n = static_cast<long>(requests.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(parallelism) if (parallelism > 1)
  for (long i = 0; i < n; ++i) {
    auto& item = out[static_cast<std::size_t>(i)];
    const auto& req = requests[static_cast<std::size_t>(i)];
    try {
      req.validate();
      item.response = backend.complete(req);
    } catch (const BackendError& e) {
      item.error = e;
    } catch (const std::exception& e) {
      item.error = BackendError(BackendErrorKind::Invalid, e.what(), 0);
    }
  }
  return out;
}

}  // namespace narrclass
