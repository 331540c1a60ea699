#include "ledgernet/parallel.hpp"

namespace ledgernet {

unsigned default_worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace ledgernet
