/**
 * A tiny element tree: views build plain objects so tests can assert on
 * structure and data attributes without a browser, and the app mounts
 * them onto the real DOM.
 */

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: VNode[];
  text?: string;
}

export function h(tag: string, attrs: Record<string, string> = {}, children: VNode[] = [], text?: string): VNode {
  return { tag, attrs, children, text };
}

export function findAll(node: VNode, predicate: (n: VNode) => boolean, out: VNode[] = []): VNode[] {
  if (predicate(node)) out.push(node);
  for (const child of node.children) findAll(child, predicate, out);
  return out;
}

export function byClass(node: VNode, className: string): VNode[] {
  return findAll(node, (n) => (n.attrs.class ?? '').split(' ').includes(className));
}

export function mount(node: VNode, doc: Document): HTMLElement {
  const el = doc.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    el.setAttribute(key, value);
  }
  if (node.text !== undefined) el.textContent = node.text;
  for (const child of node.children) {
    el.appendChild(mount(child, doc));
  }
  return el;
}
