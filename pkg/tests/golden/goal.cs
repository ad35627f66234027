using UnityEngine;

public class GoalZone : MonoBehaviour
{
    private void OnTriggerEnter(Collider other)
    {
        if (!other.CompareTag("Player"))
        {
            return;
        }
        OnGoalReached();
    }

    public void OnGoalReached()
    {
        if (GameManager.Instance != null)
        {
            GameManager.Instance.TriggerWin();
        }
    }
}
