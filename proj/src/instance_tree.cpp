// SPDX-License-Identifier: Apache-2.0
#include "alice/instance_tree.hpp"

#include <algorithm>

namespace alice {

const InstanceTree::Node *InstanceTree::find(const std::string &path) const
{
	auto it = index.find(path);
	return it == index.end() ? nullptr : &nodes[it->second];
}

bool InstanceTree::is_ancestor(const std::string &ancestor, const std::string &descendant) const
{
	return is_ancestor_path(ancestor, descendant);
}

std::vector<std::string> InstanceTree::instance_paths() const
{
	std::vector<std::string> paths;
	paths.reserve(nodes.size() > 0 ? nodes.size() - 1 : 0);
	for (std::size_t i = 1; i < nodes.size(); ++i)
		paths.push_back(nodes[i].path);
	std::sort(paths.begin(), paths.end());
	return paths;
}

namespace {

void elaborate(const Design &design, InstanceTree &tree, int node_index, std::vector<std::string> &stack)
{
	const std::string target = tree.nodes[node_index].target;
	if (std::find(stack.begin(), stack.end(), target) != stack.end())
		throw FlowError(ErrorKind::RecursionDetected, "instantiation cycle through module '" + target + "'");
	const ModuleDef *module = design.find_module(target);
	if (!module)
		throw FlowError(ErrorKind::UnresolvedModule, target);
	stack.push_back(target);
	for (const Instance &inst : module->instances) {
		InstanceTree::Node child;
		child.path = tree.nodes[node_index].path + "." + inst.name;
		child.instance_name = inst.name;
		child.target = inst.target;
		child.parent = node_index;
		int child_index = (int)tree.nodes.size();
		tree.nodes.push_back(child);
		tree.nodes[node_index].children.push_back(child_index);
		tree.index[tree.nodes[child_index].path] = child_index;
		elaborate(design, tree, child_index, stack);
	}
	stack.pop_back();
}

} // namespace

InstanceTree build_instance_tree(const Design &design)
{
	InstanceTree tree;
	InstanceTree::Node root;
	root.path = design.top;
	root.instance_name = design.top;
	root.target = design.top;
	root.parent = -1;
	tree.nodes.push_back(root);
	tree.index[root.path] = 0;
	std::vector<std::string> stack;
	elaborate(design, tree, 0, stack);
	return tree;
}

} // namespace alice
