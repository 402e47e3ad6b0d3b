#!/usr/bin/env python3
"""AST-level change distilling on inline before/after Java revisions."""

from maintminer.distill import distill

BEFORE = """
public class Cart {
    private int items;

    /** Adds one item. */
    public void add(int sku) {
        items = items + 1;
        index(sku);
    }
}
"""

AFTER = """
public class Cart {
    private int items;
    private long updatedAt;

    public void add(int sku, int quantity) {
        items = items + quantity;
        if (quantity > 10) {
            flagBulk(sku);
        }
        index(sku);
    }

    public void clear() {
        items = 0;
        updatedAt = now();
    }
}
"""

changes = distill(BEFORE, AFTER)
print("fine-grained changes between the two revisions:")
for change_type, count in sorted(changes.items(), key=lambda kv: kv[0].name):
    print(f"  {change_type.name:32} x{count}")

# the edit script reads back symmetrically
reverse = distill(AFTER, BEFORE)
print("\nand in reverse:")
for change_type, count in sorted(reverse.items(), key=lambda kv: kv[0].name):
    print(f"  {change_type.name:32} x{count}")
