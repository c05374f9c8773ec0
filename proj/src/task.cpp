#include "tslm/task.hpp"

#include "tslm/game24.hpp"
#include "tslm/gridworld.hpp"

namespace tslm {

std::shared_ptr<const TaskSpec> make_task(std::string_view name) {
  if (name == "game24") return std::make_shared<Game24Task>();
  if (name == "gridworld") return std::make_shared<GridworldTask>();
  throw std::invalid_argument("unknown task \"" + std::string(name) + "\"");
}

}  // namespace tslm
