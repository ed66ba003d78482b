package beta.generated;

public class DupHostTwo {
    int sharedHelper(int left, int right) {
        // clamp both of the incoming operands
        int a = Math.max(left, 0);
        int b = Math.max(right, 0);
        return a + b;
    }
}
